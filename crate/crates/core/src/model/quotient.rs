//! The quotient relation and the lattice of quotients of a schema.
//!
//! A quotient is identified by the set of statement sites it retains. A site
//! can only be retained together with every enclosing `if`/`while`, so the
//! quotients of `S` are exactly the ancestor-closed subsets of its sites.

use std::collections::{BTreeMap, BTreeSet};

use super::schema::{Schema, SiteId};
use super::ModelError;

/// Largest number of optional sites the lattice will enumerate.
pub const MAX_LATTICE_SITES: usize = 40;

/// Checks whether `quotient` is obtained from `schema` by replacing statements
/// with `skip`. On success returns the sites of `schema` that were deleted.
///
/// Matching is structural, so `quotient` may come from a separate parse.
pub fn is_quotient(quotient: &Schema, schema: &Schema) -> Option<BTreeSet<SiteId>> {
    let mut kept = Vec::new();
    if !match_items(quotient.items(), schema.items(), &mut kept) {
        return None;
    }
    let kept: BTreeSet<SiteId> = kept.into_iter().collect();
    Some(
        schema
            .sites()
            .into_iter()
            .filter(|s| !kept.contains(s))
            .collect(),
    )
}

fn match_items(q: &[Schema], s: &[Schema], kept: &mut Vec<SiteId>) -> bool {
    if q.is_empty() {
        return true;
    }
    if s.len() < q.len() {
        return false;
    }
    let mark = kept.len();
    if match_stmt(&q[0], &s[0], kept) && match_items(&q[1..], &s[1..], kept) {
        return true;
    }
    kept.truncate(mark);
    match_items(q, &s[1..], kept)
}

fn match_stmt(q: &Schema, s: &Schema, kept: &mut Vec<SiteId>) -> bool {
    let ok = match (q, s) {
        (Schema::Label { name: a, .. }, Schema::Label { name: b, .. }) => a == b,
        (Schema::Assign { .. }, Schema::Assign { .. }) => q == s,
        (
            Schema::If {
                pred: p1,
                args: a1,
                then_part: t1,
                else_part: e1,
                ..
            },
            Schema::If {
                pred: p2,
                args: a2,
                then_part: t2,
                else_part: e2,
                ..
            },
        ) => {
            p1 == p2
                && a1 == a2
                && match_items(t1.items(), t2.items(), kept)
                && match_items(e1.items(), e2.items(), kept)
        }
        (
            Schema::While {
                pred: p1,
                args: a1,
                body: b1,
                ..
            },
            Schema::While {
                pred: p2,
                args: a2,
                body: b2,
                ..
            },
        ) => p1 == p2 && a1 == a2 && match_items(b1.items(), b2.items(), kept),
        _ => false,
    };
    if ok {
        kept.extend(s.site());
    }
    ok
}

/// Rebuilds `schema` keeping exactly the statements whose site satisfies `keep`.
/// A statement whose site is dropped takes its whole subtree with it.
pub fn retain_sites(schema: &Schema, keep: &impl Fn(SiteId) -> bool) -> Schema {
    match schema {
        Schema::Skip => Schema::Skip,
        Schema::Seq(items) => Schema::seq(items.iter().map(|i| retain_sites(i, keep))),
        Schema::Label { site, .. } | Schema::Assign { site, .. } => {
            if keep(*site) {
                schema.clone()
            } else {
                Schema::Skip
            }
        }
        Schema::If {
            site,
            pred,
            args,
            then_part,
            else_part,
        } => {
            if !keep(*site) {
                return Schema::Skip;
            }
            Schema::If {
                site: *site,
                pred: pred.clone(),
                args: args.clone(),
                then_part: Box::new(retain_sites(then_part, keep)),
                else_part: Box::new(retain_sites(else_part, keep)),
            }
        }
        Schema::While {
            site,
            pred,
            args,
            body,
        } => {
            if !keep(*site) {
                return Schema::Skip;
            }
            Schema::While {
                site: *site,
                pred: pred.clone(),
                args: args.clone(),
                body: Box::new(retain_sites(body, keep)),
            }
        }
    }
}

/// Maps each site to the sites of its enclosing `if`/`while` statements,
/// innermost last.
pub fn ancestor_map(schema: &Schema) -> BTreeMap<SiteId, Vec<SiteId>> {
    fn walk(node: &Schema, stack: &mut Vec<SiteId>, out: &mut BTreeMap<SiteId, Vec<SiteId>>) {
        match node {
            Schema::Skip => {}
            Schema::Seq(items) => items.iter().for_each(|i| walk(i, stack, out)),
            Schema::Label { site, .. } | Schema::Assign { site, .. } => {
                out.insert(*site, stack.clone());
            }
            Schema::If {
                site,
                then_part,
                else_part,
                ..
            } => {
                out.insert(*site, stack.clone());
                stack.push(*site);
                walk(then_part, stack, out);
                walk(else_part, stack, out);
                stack.pop();
            }
            Schema::While { site, body, .. } => {
                out.insert(*site, stack.clone());
                stack.push(*site);
                walk(body, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(schema, &mut Vec::new(), &mut out);
    out
}

/// The quotients of a schema that retain a fixed set of mandatory sites.
#[derive(Clone, Debug)]
pub struct QuotientLattice<'a> {
    schema: &'a Schema,
    mandatory: BTreeSet<SiteId>,
    optional: Vec<SiteId>,
    /// Bit index of the nearest enclosing optional site.
    parent: Vec<Option<usize>>,
}

impl<'a> QuotientLattice<'a> {
    /// `must_contain` is closed under enclosing statements before use.
    pub fn new(
        schema: &'a Schema,
        must_contain: &BTreeSet<SiteId>,
        max_optional: usize,
    ) -> Result<Self, ModelError> {
        let ancestors = ancestor_map(schema);
        let mut mandatory = BTreeSet::new();
        for site in must_contain {
            let Some(up) = ancestors.get(site) else {
                return Err(ModelError::UnknownSite(*site));
            };
            mandatory.insert(*site);
            mandatory.extend(up.iter().copied());
        }
        let optional: Vec<SiteId> = schema
            .sites()
            .into_iter()
            .filter(|s| !mandatory.contains(s))
            .collect();
        let limit = max_optional.min(MAX_LATTICE_SITES);
        if optional.len() > limit {
            return Err(ModelError::LatticeTooLarge {
                sites: optional.len(),
                limit,
            });
        }
        let index: BTreeMap<SiteId, usize> =
            optional.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let parent = optional
            .iter()
            .map(|s| {
                ancestors[s]
                    .iter()
                    .rev()
                    .find_map(|a| index.get(a).copied())
            })
            .collect();
        Ok(QuotientLattice {
            schema,
            mandatory,
            optional,
            parent,
        })
    }

    pub fn schema(&self) -> &'a Schema {
        self.schema
    }

    pub fn mandatory(&self) -> &BTreeSet<SiteId> {
        &self.mandatory
    }

    pub fn optional(&self) -> &[SiteId] {
        &self.optional
    }

    /// Mask retaining every optional site.
    pub fn full_mask(&self) -> u64 {
        if self.optional.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.optional.len()) - 1
        }
    }

    /// Every ancestor-closed retention mask, in no particular order.
    pub fn masks(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.extend_masks(0, 0, &mut out);
        out
    }

    fn extend_masks(&self, k: usize, mask: u64, out: &mut Vec<u64>) {
        if k == self.optional.len() {
            out.push(mask);
            return;
        }
        self.extend_masks(k + 1, mask, out);
        let allowed = match self.parent[k] {
            Some(p) => mask & (1 << p) != 0,
            None => true,
        };
        if allowed {
            self.extend_masks(k + 1, mask | (1 << k), out);
        }
    }

    /// Masks ordered by descending retained count, ties by descending mask.
    pub fn masks_descending(&self) -> Vec<u64> {
        let mut masks = self.masks();
        masks.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(b.cmp(a)));
        masks
    }

    /// Masks ordered by ascending retained count, ties by ascending mask.
    pub fn masks_ascending(&self) -> Vec<u64> {
        let mut masks = self.masks();
        masks.sort_by(|a, b| a.count_ones().cmp(&b.count_ones()).then(a.cmp(b)));
        masks
    }

    pub fn retained_sites(&self, mask: u64) -> BTreeSet<SiteId> {
        let mut out = self.mandatory.clone();
        for (i, s) in self.optional.iter().enumerate() {
            if mask & (1 << i) != 0 {
                out.insert(*s);
            }
        }
        out
    }

    pub fn build(&self, mask: u64) -> Schema {
        let retained = self.retained_sites(mask);
        retain_sites(self.schema, &|s| retained.contains(&s))
    }
}

/// Every quotient of `schema` retaining `must_contain`, largest first, so
/// `schema` itself comes out first.
pub fn enumerate_quotients<'a>(
    schema: &'a Schema,
    must_contain: &BTreeSet<SiteId>,
) -> Result<impl Iterator<Item = Schema> + 'a, ModelError> {
    let lattice = QuotientLattice::new(schema, must_contain, MAX_LATTICE_SITES)?;
    let masks = lattice.masks_descending();
    Ok(masks.into_iter().map(move |m| lattice.build(m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn branch_example() -> Schema {
        Schema::seq([
            Schema::assign("u", "h", &[]),
            Schema::if_else(
                "p",
                &["w"],
                Schema::assign("v", "f", &["u"]),
                Schema::assign("v", "g", &[]),
            ),
        ])
        .numbered()
    }

    /// Structural-recursion count of quotients, independent of the lattice.
    fn count(s: &Schema) -> u64 {
        s.items()
            .iter()
            .map(|item| {
                1 + match item {
                    Schema::If {
                        then_part,
                        else_part,
                        ..
                    } => count(then_part) * count(else_part),
                    Schema::While { body, .. } => count(body),
                    _ => 1,
                }
            })
            .product()
    }

    #[test]
    fn skip_and_self_are_quotients() {
        let s = branch_example();
        assert_eq!(is_quotient(&Schema::Skip, &s).unwrap().len(), 4);
        assert!(is_quotient(&s, &s).unwrap().is_empty());
        assert!(is_quotient(&s, &Schema::Skip).is_none());
    }

    #[test]
    fn deleting_a_branch_is_a_quotient() {
        let s = branch_example();
        let q = Schema::seq([
            Schema::assign("u", "h", &[]),
            Schema::if_else("p", &["w"], Schema::Skip, Schema::assign("v", "g", &[])),
        ]);
        let deleted = is_quotient(&q, &s).unwrap();
        assert_eq!(deleted, BTreeSet::from([SiteId(2)]));
        let not_q = Schema::seq([
            Schema::if_else("p", &["w"], Schema::Skip, Schema::assign("v", "g", &[])),
            Schema::assign("u", "h", &[]),
        ]);
        assert!(is_quotient(&not_q, &s).is_none());
    }

    #[test]
    fn single_assignment_has_two_quotients() {
        let s = Schema::assign("v", "f", &["u"]).numbered();
        let qs: Vec<_> = enumerate_quotients(&s, &BTreeSet::new()).unwrap().collect();
        assert_eq!(qs, vec![s.clone(), Schema::Skip]);
    }

    #[test]
    fn must_contain_is_respected() {
        let s = Schema::seq([
            Schema::assign("a", "f1", &[]),
            Schema::assign("b", "f2", &[]),
        ])
        .numbered();
        let qs: Vec<_> = enumerate_quotients(&s, &BTreeSet::from([SiteId(0)]))
            .unwrap()
            .collect();
        assert_eq!(qs.len(), 2);
        assert_eq!(qs[0], s);
        assert_eq!(qs[1], Schema::assign("a", "f1", &[]));
    }

    #[test]
    fn branch_quotient_count_matches_recursive_count() {
        let s = branch_example();
        let qs: Vec<_> = enumerate_quotients(&s, &BTreeSet::new()).unwrap().collect();
        assert_eq!(count(&s), 10);
        assert_eq!(qs.len() as u64, count(&s));
        for (i, a) in qs.iter().enumerate() {
            assert!(is_quotient(a, &s).is_some());
            for b in &qs[i + 1..] {
                assert_ne!(a, b);
            }
        }
        let sizes: Vec<usize> = qs.iter().map(Schema::size).collect();
        assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn mandatory_sites_close_upwards() {
        let s = branch_example();
        let lattice = QuotientLattice::new(&s, &BTreeSet::from([SiteId(2)]), 24).unwrap();
        assert_eq!(lattice.mandatory(), &BTreeSet::from([SiteId(1), SiteId(2)]));
        assert_eq!(lattice.masks().len(), 4);
    }

    #[test]
    fn budget_is_enforced() {
        let s = branch_example();
        assert!(matches!(
            QuotientLattice::new(&s, &BTreeSet::new(), 3),
            Err(ModelError::LatticeTooLarge { sites: 4, limit: 3 })
        ));
    }
}
