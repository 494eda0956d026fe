use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Span, SyntaxError};
use crate::model::{check_linear, LinearityReport, Schema, SiteId, SymbolTable};
use crate::symbol::Symbol;

/// A parsed schema with its inferred symbol table and source positions.
#[derive(Clone, Debug)]
pub struct ParsedSchema {
    pub schema: Schema,
    pub symbols: SymbolTable,
    pub spans: BTreeMap<SiteId, Span>,
    /// Non-empty `repeated` means the schema parsed but is not linear.
    pub linearity: LinearityReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    ColonEq,
    LParen,
    RParen,
    Comma,
    Semi,
    LBrace,
    RBrace,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::ColonEq => "`:=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
        }
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if is_ident_char(c) {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                s.push(bump(&mut chars));
            }
            out.push((Tok::Ident(s), span));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            ':' => {
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    Tok::ColonEq
                } else {
                    return Err(SyntaxError::at(span, "expected `:=`"));
                }
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            other => {
                return Err(SyntaxError::at(
                    span,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push((tok, span));
    }
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["skip", "label", "if", "else", "while"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Space {
    Function,
    Predicate,
    Variable,
    Label,
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
    spans: Vec<Span>,
    names: BTreeMap<String, (Space, Option<usize>)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map(|(_, s)| *s).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        let span = self.span();
        match self.next() {
            Some((t, _)) if t == want => Ok(()),
            Some((t, _)) => Err(SyntaxError::at(
                span,
                format!("expected {}, found {}", want.describe(), t.describe()),
            )),
            None => Err(SyntaxError::at(
                span,
                format!("expected {}, found end of input", want.describe()),
            )),
        }
    }

    fn ident(&mut self) -> Result<(String, Span), SyntaxError> {
        let span = self.span();
        match self.next() {
            Some((Tok::Ident(s), sp)) if !KEYWORDS.contains(&s.as_str()) => Ok((s, sp)),
            Some((t, _)) => Err(SyntaxError::at(
                span,
                format!("expected identifier, found {}", t.describe()),
            )),
            None => Err(SyntaxError::at(
                span,
                "expected identifier, found end of input",
            )),
        }
    }

    fn declare(
        &mut self,
        name: &str,
        space: Space,
        arity: Option<usize>,
        span: Span,
    ) -> Result<(), SyntaxError> {
        match self.names.get(name) {
            Some(&(known, _)) if known != space => Err(SyntaxError::at(
                span,
                format!(
                    "`{name}` used as {} and {}",
                    describe(known),
                    describe(space)
                ),
            )),
            Some(&(_, Some(k))) if arity.is_some_and(|a| a != k) => Err(SyntaxError::at(
                span,
                format!("arity conflict for `{name}`: {} vs {k}", arity.unwrap()),
            )),
            _ => {
                self.names.insert(name.to_string(), (space, arity));
                Ok(())
            }
        }
    }

    fn args(&mut self) -> Result<Vec<String>, SyntaxError> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.next();
            return Ok(out);
        }
        loop {
            let (v, sp) = self.ident()?;
            self.declare(&v, Space::Variable, None, sp)?;
            out.push(v);
            let span = self.span();
            match self.next() {
                Some((Tok::Comma, _)) => continue,
                Some((Tok::RParen, _)) => return Ok(out),
                _ => return Err(SyntaxError::at(span, "expected `,` or `)`")),
            }
        }
    }

    fn block(&mut self) -> Result<Schema, SyntaxError> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek().is_none() {
                return Err(SyntaxError::at(
                    self.span(),
                    "unterminated block, expected `}`",
                ));
            }
            items.push(self.statement()?);
        }
        self.next();
        Ok(Schema::seq(items))
    }

    fn statement(&mut self) -> Result<Schema, SyntaxError> {
        let span = self.span();
        let Some(Tok::Ident(word)) = self.peek().cloned() else {
            let found = self
                .peek()
                .map(Tok::describe)
                .unwrap_or("end of input".into());
            return Err(SyntaxError::at(
                span,
                format!("expected statement, found {found}"),
            ));
        };
        match word.as_str() {
            "skip" => {
                self.next();
                self.expect(Tok::Semi)?;
                Ok(Schema::Skip)
            }
            "label" => {
                self.next();
                let (name, sp) = self.ident()?;
                self.declare(&name, Space::Label, None, sp)?;
                self.expect(Tok::Semi)?;
                self.spans.push(span);
                Ok(Schema::label(&name))
            }
            "if" => {
                self.next();
                let (pred, sp) = self.ident()?;
                let args = self.args()?;
                self.declare(&pred, Space::Predicate, Some(args.len()), sp)?;
                self.spans.push(span);
                let then_part = self.block()?;
                let else_part = if self.peek() == Some(&Tok::Ident("else".into())) {
                    self.next();
                    self.block()?
                } else {
                    Schema::Skip
                };
                let refs: Vec<&str> = args.iter().map(String::as_str).collect();
                Ok(Schema::if_else(&pred, &refs, then_part, else_part))
            }
            "while" => {
                self.next();
                let (pred, sp) = self.ident()?;
                let args = self.args()?;
                self.declare(&pred, Space::Predicate, Some(args.len()), sp)?;
                self.spans.push(span);
                let body = self.block()?;
                let refs: Vec<&str> = args.iter().map(String::as_str).collect();
                Ok(Schema::while_loop(&pred, &refs, body))
            }
            "else" => Err(SyntaxError::at(span, "`else` without `if`")),
            _ => {
                let (target, tsp) = self.ident()?;
                self.declare(&target, Space::Variable, None, tsp)?;
                self.expect(Tok::ColonEq)?;
                let (func, fsp) = self.ident()?;
                let args = self.args()?;
                self.declare(&func, Space::Function, Some(args.len()), fsp)?;
                self.expect(Tok::Semi)?;
                self.spans.push(span);
                let refs: Vec<&str> = args.iter().map(String::as_str).collect();
                Ok(Schema::assign(&target, &func, &refs))
            }
        }
    }
}

fn describe(space: Space) -> &'static str {
    match space {
        Space::Function => "function",
        Space::Predicate => "predicate",
        Space::Variable => "variable",
        Space::Label => "label",
    }
}

/// Parses schema source text. Site ids are assigned in preorder.
pub fn parse_schema(text: &str) -> Result<ParsedSchema, SyntaxError> {
    let toks = lex(text)?;
    let end = {
        let lines = text.split('\n').count();
        let col = text.rsplit('\n').next().map_or(0, str::len) + 1;
        Span { line: lines, col }
    };
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        spans: Vec::new(),
        names: BTreeMap::new(),
    };
    let mut items = Vec::new();
    while p.peek().is_some() {
        items.push(p.statement()?);
    }
    let schema = Schema::seq(items).numbered();
    // Statements are numbered in preorder, which is also the order their spans
    // were recorded in.
    let spans = schema
        .sites()
        .into_iter()
        .zip(p.spans)
        .collect::<BTreeMap<_, _>>();
    let symbols =
        SymbolTable::infer(&schema).map_err(|e| SyntaxError::at(Span::START, e.to_string()))?;
    let linearity = check_linear(&schema);
    Ok(ParsedSchema {
        schema,
        symbols,
        spans,
        linearity,
    })
}

/// Parses a schema, discarding the auxiliary parse output.
pub fn schema_from_str(text: &str) -> Result<Schema, SyntaxError> {
    parse_schema(text).map(|p| p.schema)
}

fn write_args(out: &mut String, args: &[Symbol]) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(a.as_str());
    }
    out.push(')');
}

fn write_block(out: &mut String, body: &Schema, depth: usize) {
    out.push_str("{\n");
    write_stmts(out, body, depth + 1);
    indent(out, depth);
    out.push('}');
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

fn write_stmts(out: &mut String, s: &Schema, depth: usize) {
    if s.is_skip() {
        indent(out, depth);
        out.push_str("skip;\n");
        return;
    }
    for item in s.items() {
        indent(out, depth);
        match item {
            Schema::Label { name, .. } => {
                let _ = writeln!(out, "label {name};");
            }
            Schema::Assign {
                target, func, args, ..
            } => {
                let _ = write!(out, "{target} := {func}");
                write_args(out, args);
                out.push_str(";\n");
            }
            Schema::If {
                pred,
                args,
                then_part,
                else_part,
                ..
            } => {
                let _ = write!(out, "if {pred}");
                write_args(out, args);
                out.push(' ');
                write_block(out, then_part, depth);
                if !else_part.is_skip() {
                    out.push_str(" else ");
                    write_block(out, else_part, depth);
                }
                out.push('\n');
            }
            Schema::While {
                pred, args, body, ..
            } => {
                let _ = write!(out, "while {pred}");
                write_args(out, args);
                out.push(' ');
                write_block(out, body, depth);
                out.push('\n');
            }
            Schema::Skip | Schema::Seq(_) => unreachable!("canonical sequence items"),
        }
    }
}

/// Prints a schema in the concrete syntax accepted by [`parse_schema`].
pub fn print_schema(schema: &Schema) -> String {
    let mut out = String::new();
    write_stmts(&mut out, schema, 0);
    out
}
