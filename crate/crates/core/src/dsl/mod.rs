//! `.hymap` source format.
//!
//! ```text
//! # comment
//! product "NetFix"
//! customer "mobile users"
//! feature "status overlay"
//! concept "network efficiency"
//! concept "user satisfaction"
//! offers "status overlay"
//! influences "network efficiency" -(+)-> "user satisfaction"
//! perceives "mobile users" -> "user satisfaction" [would-like-to]
//! ```
//!
//! Edges name their endpoints by label. Declarations may appear anywhere
//! after the `product` header, so statement order never changes the parsed
//! map. An optional trailing `[...]` attribute list on edge statements
//! records `saturated` and, for `perceives`, `would-like-to`.

mod json;

pub use json::{export_json, import_json, JsonError, MapDocument, SCHEMA_VERSION};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{
    normalize_label, CognitiveMap, EdgeKind, MapEdge, ModelError, NodeId, NodeKind,
    ProblemConnective, Sign,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Syntax,
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub code: String,
    pub message: String,
    pub excerpt: String,
    pub stage: Stage,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:{}: error[{}]: {}", self.line, self.column, self.code, self.message)?;
        writeln!(f, "  | {}", self.excerpt)?;
        write!(f, "  | {}^", " ".repeat(self.column.saturating_sub(1)))
    }
}

/// Non-fatal remark produced while parsing, e.g. a repeated declaration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseWarning {
    pub line: usize,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub map: CognitiveMap,
    pub warnings: Vec<ParseWarning>,
}

/// Source text plus a line index for positioned diagnostics.
#[derive(Debug, Clone)]
pub struct SourceDocument {
    text: String,
}

impl SourceDocument {
    pub fn new(text: impl Into<String>) -> Self {
        SourceDocument { text: text.into() }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Lines without their terminator; LF and CRLF both accepted.
    pub fn lines(&self) -> impl Iterator<Item = &str> {
        self.text
            .split('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
    }

    pub fn line(&self, n: usize) -> &str {
        self.lines().nth(n.saturating_sub(1)).unwrap_or("")
    }
}

impl From<&str> for SourceDocument {
    fn from(s: &str) -> Self {
        SourceDocument::new(s)
    }
}

// ---------------------------------------------------------------------------
// Lexing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Quoted(String),
    Sign(Sign),
    Arrow,
    Attrs(Vec<String>),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

struct LexError {
    col: usize,
    code: &'static str,
    message: String,
}

fn lex(line: &str) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => {
                        return Err(LexError {
                            col,
                            code: "UnterminatedQuote",
                            message: "label is missing its closing quote".into(),
                        })
                    }
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        let esc = match chars.get(i + 1) {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            Some('r') => '\r',
                            Some('t') => '\t',
                            other => {
                                return Err(LexError {
                                    col: i + 1,
                                    code: "InvalidEscape",
                                    message: format!(
                                        "unknown escape `\\{}`",
                                        other.map(|c| c.to_string()).unwrap_or_default()
                                    ),
                                })
                            }
                        };
                        s.push(esc);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            out.push(Spanned {
                tok: Tok::Quoted(s),
                col,
            });
        } else if c == '-' {
            let rest: String = chars[i..].iter().take(6).collect();
            let (tok, len) = if rest.starts_with("-(+)->") {
                (Tok::Sign(Sign::Positive), 6)
            } else if rest.starts_with("-(-)->") {
                (Tok::Sign(Sign::Negative), 6)
            } else if rest.starts_with("-(o)->") {
                (Tok::Sign(Sign::Neutral), 6)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else {
                return Err(LexError {
                    col,
                    code: "InvalidArrow",
                    message: "expected `->`, `-(+)->`, `-(-)->` or `-(o)->`".into(),
                });
            };
            out.push(Spanned { tok, col });
            i += len;
        } else if c == '[' {
            let close = chars[i..].iter().position(|&c| c == ']').ok_or(LexError {
                col,
                code: "UnterminatedAttributes",
                message: "attribute list is missing its closing `]`".into(),
            })?;
            let inner: String = chars[i + 1..i + close].iter().collect();
            let attrs = inner
                .split(',')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect();
            out.push(Spanned {
                tok: Tok::Attrs(attrs),
                col,
            });
            i += close + 1;
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Word(chars[start..i].iter().collect()),
                col,
            });
        } else {
            return Err(LexError {
                col,
                code: "UnexpectedCharacter",
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Label {
    text: String,
    col: usize,
}

#[derive(Debug, Clone)]
enum Stmt {
    Product(Label),
    Declare(NodeKind, Label),
    Offers {
        feature: Label,
        attrs: EdgeAttrs,
    },
    Influences {
        src: Label,
        sign: Sign,
        dst: Label,
        attrs: EdgeAttrs,
    },
    Perceives {
        customer: Label,
        concept: Label,
        attrs: EdgeAttrs,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct EdgeAttrs {
    saturated: bool,
    connective: ProblemConnective,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, col: usize, stage: Stage, code: &str, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            line: self.number,
            column: col.max(1),
            code: code.to_string(),
            message: message.into(),
            excerpt: self.text.to_string(),
            stage,
        }
    }

    fn syntax(&self, col: usize, code: &str, message: impl Into<String>) -> ParseDiagnostic {
        self.error(col, Stage::Syntax, code, message)
    }
}

fn parse_stmt(line: &Line<'_>, toks: Vec<Spanned>) -> Result<Stmt, ParseDiagnostic> {
    let end_col = line.text.chars().count() + 1;
    let mut it = toks.into_iter().peekable();
    let head = it.next().expect("caller skips blank lines");
    let keyword = match head.tok {
        Tok::Word(w) => w,
        _ => return Err(line.syntax(head.col, "ExpectedKeyword", "a statement must start with a keyword")),
    };

    let quoted = |what: &str, it: &mut std::iter::Peekable<std::vec::IntoIter<Spanned>>| match it.next() {
        Some(Spanned {
            tok: Tok::Quoted(text),
            col,
        }) => Ok(Label { text, col }),
        Some(t) => Err(line.syntax(t.col, "ExpectedLabel", format!("expected a quoted {what}"))),
        None => Err(line.syntax(end_col, "ExpectedLabel", format!("expected a quoted {what}"))),
    };

    let stmt = match keyword.as_str() {
        "product" => Stmt::Product(quoted("product name", &mut it)?),
        "customer" => Stmt::Declare(NodeKind::Customer, quoted("customer label", &mut it)?),
        "feature" => Stmt::Declare(NodeKind::Feature, quoted("feature label", &mut it)?),
        "concept" => Stmt::Declare(NodeKind::Concept, quoted("concept label", &mut it)?),
        "offers" => Stmt::Offers {
            feature: quoted("feature label", &mut it)?,
            attrs: EdgeAttrs::default(),
        },
        "influences" => {
            let src = quoted("source label", &mut it)?;
            let sign = match it.next() {
                Some(Spanned {
                    tok: Tok::Sign(s), ..
                }) => s,
                Some(t) => {
                    return Err(line.syntax(t.col, "ExpectedSign", "expected `-(+)->`, `-(-)->` or `-(o)->`"))
                }
                None => {
                    return Err(line.syntax(end_col, "ExpectedSign", "expected `-(+)->`, `-(-)->` or `-(o)->`"))
                }
            };
            let dst = quoted("target concept label", &mut it)?;
            Stmt::Influences {
                src,
                sign,
                dst,
                attrs: EdgeAttrs::default(),
            }
        }
        "perceives" => {
            let customer = quoted("customer label", &mut it)?;
            match it.next() {
                Some(Spanned { tok: Tok::Arrow, .. }) => {}
                Some(t) => return Err(line.syntax(t.col, "ExpectedArrow", "expected `->`")),
                None => return Err(line.syntax(end_col, "ExpectedArrow", "expected `->`")),
            }
            let concept = quoted("concept label", &mut it)?;
            Stmt::Perceives {
                customer,
                concept,
                attrs: EdgeAttrs::default(),
            }
        }
        other => {
            return Err(line.syntax(head.col, "UnknownKeyword", format!("unknown keyword `{other}`")))
        }
    };

    let mut stmt = stmt;
    if let Some(Spanned {
        tok: Tok::Attrs(_), ..
    }) = it.peek()
    {
        let Some(Spanned {
            tok: Tok::Attrs(list),
            col,
        }) = it.next()
        else {
            unreachable!()
        };
        let is_perception = matches!(stmt, Stmt::Perceives { .. });
        let attrs = match &mut stmt {
            Stmt::Offers { attrs, .. }
            | Stmt::Influences { attrs, .. }
            | Stmt::Perceives { attrs, .. } => attrs,
            _ => {
                return Err(line.syntax(col, "UnexpectedAttributes", "only edge statements take attributes"))
            }
        };
        for a in list {
            match a.as_str() {
                "saturated" => attrs.saturated = true,
                "would-like-to" if is_perception => attrs.connective = ProblemConnective::WouldLikeTo,
                "has" if is_perception => attrs.connective = ProblemConnective::Has,
                _ => {
                    return Err(line.syntax(col, "UnknownAttribute", format!("unknown attribute `{a}`")))
                }
            }
        }
    }
    if let Some(extra) = it.next() {
        return Err(line.syntax(extra.col, "TrailingInput", "unexpected input after statement"));
    }
    Ok(stmt)
}

// ---------------------------------------------------------------------------
// Parse
// ---------------------------------------------------------------------------

/// Parse a `.hymap` document.
///
/// Either returns a map that validates without errors or at least one
/// diagnostic. Syntax errors are reported for every bad line; semantic
/// checks only run when the whole file is syntactically valid.
pub fn parse(doc: &SourceDocument) -> Result<Parsed, Vec<ParseDiagnostic>> {
    let mut stmts: Vec<(usize, Stmt)> = Vec::new();
    let mut errors = Vec::new();
    let lines: Vec<&str> = doc.lines().collect();
    for (i, text) in lines.iter().enumerate() {
        let line = Line { number: i + 1, text };
        match lex(text) {
            Err(e) => errors.push(line.syntax(e.col, e.code, e.message)),
            Ok(toks) if toks.is_empty() => {}
            Ok(toks) => match parse_stmt(&line, toks) {
                Ok(s) => stmts.push((i + 1, s)),
                Err(d) => errors.push(d),
            },
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let line_of = |n: usize| Line {
        number: n,
        text: lines.get(n - 1).copied().unwrap_or(""),
    };

    let (product, rest) = match stmts.split_first() {
        Some(((n, Stmt::Product(label)), rest)) => ((*n, label.clone()), rest),
        Some(((n, _), _)) => {
            return Err(vec![line_of(*n).error(
                1,
                Stage::Semantic,
                "MissingProductHeader",
                "the first statement must be `product \"<name>\"`",
            )])
        }
        None => {
            return Err(vec![line_of(1).error(
                1,
                Stage::Semantic,
                "MissingProductHeader",
                "empty document: expected `product \"<name>\"`",
            )])
        }
    };
    build(product, rest, &line_of)
}

/// Convenience wrapper over [`parse`] for plain text.
pub fn parse_str(text: &str) -> Result<Parsed, Vec<ParseDiagnostic>> {
    parse(&SourceDocument::new(text))
}

struct Decl {
    kind: NodeKind,
    label: String,
    line: usize,
    col: usize,
}

struct PendingEdge {
    line: usize,
    col: usize,
    src: NodeId,
    dst: NodeId,
    sign: Option<Sign>,
    attrs: EdgeAttrs,
    key: (EdgeKind, String, String, NodeKind),
}

fn build<'a>(
    (product_line, product): (usize, Label),
    rest: &[(usize, Stmt)],
    line_of: &dyn Fn(usize) -> Line<'a>,
) -> Result<Parsed, Vec<ParseDiagnostic>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let sem = |n: usize, col: usize, code: &str, msg: String| line_of(n).error(col, Stage::Semantic, code, msg);

    if product.text.trim().is_empty() {
        errors.push(sem(product_line, product.col, "EmptyLabel", "product name must not be empty".into()));
    }

    // Pass 1: declarations.
    let mut decls: Vec<Decl> = Vec::new();
    let mut by_norm: HashMap<(u8, String), usize> = HashMap::new();
    let namespace = |k: NodeKind| match k {
        NodeKind::Customer => 1u8,
        _ => 2,
    };
    for (n, stmt) in rest {
        match stmt {
            Stmt::Product(l) => errors.push(sem(*n, l.col, "SecondProduct", "a map has exactly one product".into())),
            Stmt::Declare(kind, l) => {
                if l.text.trim().is_empty() {
                    errors.push(sem(*n, l.col, "EmptyLabel", format!("{kind} label must not be empty")));
                    continue;
                }
                let key = (namespace(*kind), normalize_label(&l.text));
                match by_norm.get(&key) {
                    Some(&i) if decls[i].kind == *kind && decls[i].label == l.text => {
                        warnings.push(ParseWarning {
                            line: *n,
                            code: "DuplicateDeclaration".into(),
                            message: format!("{kind} {:?} already declared on line {}", l.text, decls[i].line),
                        });
                    }
                    Some(&i) => errors.push(sem(
                        *n,
                        l.col,
                        "DuplicateLabel",
                        format!(
                            "{kind} {:?} clashes with {} {:?} declared on line {}",
                            l.text, decls[i].kind, decls[i].label, decls[i].line
                        ),
                    )),
                    None => {
                        by_norm.insert(key, decls.len());
                        decls.push(Decl {
                            kind: *kind,
                            label: l.text.clone(),
                            line: *n,
                            col: l.col,
                        });
                    }
                }
            }
            _ => {}
        }
    }

    let mut map = CognitiveMap::new(product.text.clone());
    let product_id = map.add_node(NodeKind::Product, &product.text).ok();
    let mut order: Vec<&Decl> = decls.iter().collect();
    order.sort_by(|a, b| (a.kind, &a.label).cmp(&(b.kind, &b.label)));
    let mut ids: HashMap<(u8, String), (NodeId, NodeKind, String)> = HashMap::new();
    for d in order {
        match map.add_node(d.kind, &d.label) {
            Ok(id) => {
                ids.insert(
                    (namespace(d.kind), normalize_label(&d.label)),
                    (id, d.kind, d.label.clone()),
                );
            }
            Err(e) => errors.push(sem(d.line, d.col, e.code(), e.to_string())),
        }
    }

    // Pass 2: edges.
    let resolve = |label: &Label, ns: u8, want: &[NodeKind], n: usize| -> Result<(NodeId, NodeKind, String), ParseDiagnostic> {
        match ids.get(&(ns, normalize_label(&label.text))) {
            Some((id, kind, text)) if want.contains(kind) => Ok((id.clone(), *kind, text.clone())),
            Some((_, kind, _)) => Err(sem(
                n,
                label.col,
                "IllegalEndpointPair",
                format!("{:?} is a {kind}, expected {}", label.text, kinds_phrase(want)),
            )),
            None => Err(sem(
                n,
                label.col,
                "UndeclaredNode",
                format!("no {} labelled {:?} is declared", kinds_phrase(want), label.text),
            )),
        }
    };

    let mut pending: Vec<PendingEdge> = Vec::new();
    for (n, stmt) in rest {
        let edge = match stmt {
            Stmt::Offers { feature, attrs } => {
                let Some(pid) = product_id.clone() else { continue };
                resolve(feature, 2, &[NodeKind::Feature], *n).map(|(fid, _, flabel)| PendingEdge {
                    line: *n,
                    col: feature.col,
                    src: pid,
                    dst: fid,
                    sign: None,
                    attrs: *attrs,
                    key: (EdgeKind::Offering, product.text.clone(), flabel, NodeKind::Product),
                })
            }
            Stmt::Influences { src, sign, dst, attrs } => {
                let s = resolve(src, 2, &[NodeKind::Feature, NodeKind::Concept], *n);
                let d = resolve(dst, 2, &[NodeKind::Concept], *n);
                match (s, d) {
                    (Ok((sid, skind, slabel)), Ok((did, _, dlabel))) => Ok(PendingEdge {
                        line: *n,
                        col: src.col,
                        src: sid,
                        dst: did,
                        sign: Some(*sign),
                        attrs: *attrs,
                        key: (EdgeKind::Influence, slabel, dlabel, skind),
                    }),
                    (Err(e), _) | (_, Err(e)) => Err(e),
                }
            }
            Stmt::Perceives {
                customer,
                concept,
                attrs,
            } => {
                let s = resolve(customer, 1, &[NodeKind::Customer], *n);
                let d = resolve(concept, 2, &[NodeKind::Concept], *n);
                match (s, d) {
                    (Ok((sid, _, slabel)), Ok((did, _, dlabel))) => Ok(PendingEdge {
                        line: *n,
                        col: customer.col,
                        src: sid,
                        dst: did,
                        sign: None,
                        attrs: *attrs,
                        key: (EdgeKind::Perception, slabel, dlabel, NodeKind::Customer),
                    }),
                    (Err(e), _) | (_, Err(e)) => Err(e),
                }
            }
            _ => continue,
        };
        match edge {
            Ok(e) => pending.push(e),
            Err(d) => errors.push(d),
        }
    }

    // Repeated edge statements: identical ones are tolerated, conflicting
    // ones are errors. Kept in source order so the later line is blamed.
    let mut unique: Vec<PendingEdge> = Vec::new();
    for e in pending {
        if let Some(prev) = unique
            .iter_mut()
            .find(|p| p.src == e.src && p.dst == e.dst)
        {
            if prev.sign == e.sign {
                prev.attrs.saturated |= e.attrs.saturated;
                if e.attrs.connective != ProblemConnective::Has {
                    prev.attrs.connective = e.attrs.connective;
                }
                warnings.push(ParseWarning {
                    line: e.line,
                    code: "DuplicateEdge".into(),
                    message: format!("edge already stated on line {}", prev.line),
                });
            } else {
                errors.push(sem(
                    e.line,
                    e.col,
                    "DuplicateEdge",
                    format!("conflicting sign for the edge stated on line {}", prev.line),
                ));
            }
            continue;
        }
        unique.push(e);
    }

    unique.sort_by(|a, b| a.key.cmp(&b.key));
    for e in &unique {
        match map.add_edge(&e.src, &e.dst, e.sign) {
            Ok(id) => {
                if e.attrs.saturated {
                    map.set_saturated(id.as_str(), true).expect("just added");
                }
                if e.attrs.connective != ProblemConnective::Has {
                    map.set_connective(id.as_str(), e.attrs.connective).expect("just added");
                }
            }
            Err(err) => {
                let message = match &err {
                    ModelError::WouldCreateCycle { path } => {
                        let labels: Vec<String> = path
                            .iter()
                            .map(|id| map.node(id.as_str()).map(|n| format!("{:?}", n.label)).unwrap_or_default())
                            .collect();
                        format!("edge would close a cycle: {}", labels.join(" -> "))
                    }
                    other => other.to_string(),
                };
                errors.push(sem(e.line, e.col, err.code(), message));
            }
        }
    }

    if !errors.is_empty() {
        errors.sort_by_key(|d| (d.line, d.column));
        return Err(errors);
    }
    Ok(Parsed { map, warnings })
}

fn kinds_phrase(kinds: &[NodeKind]) -> String {
    kinds
        .iter()
        .map(|k| k.as_str())
        .collect::<Vec<_>>()
        .join(" or ")
}

// ---------------------------------------------------------------------------
// Serialize
// ---------------------------------------------------------------------------

pub fn quote(label: &str) -> String {
    let mut out = String::with_capacity(label.len() + 2);
    out.push('"');
    for c in label.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Canonical text for a map: a function of its structure only.
pub fn serialize(map: &CognitiveMap) -> SourceDocument {
    let mut out = String::new();
    if let Some(p) = map.product() {
        out.push_str(&format!("product {}\n", quote(&p.label)));
    }

    for kind in [NodeKind::Customer, NodeKind::Feature, NodeKind::Concept] {
        let mut labels: Vec<&str> = map.nodes_of(kind).map(|n| n.label.as_str()).collect();
        if labels.is_empty() {
            continue;
        }
        labels.sort();
        out.push('\n');
        for l in labels {
            out.push_str(&format!("{} {}\n", kind.as_str(), quote(l)));
        }
    }

    let label = |id: &NodeId| map.node(id.as_str()).map(|n| n.label.as_str()).unwrap_or("");
    let kind_of = |id: &NodeId| map.node(id.as_str()).map(|n| n.kind).unwrap_or(NodeKind::Concept);
    for kind in [EdgeKind::Offering, EdgeKind::Influence, EdgeKind::Perception] {
        let mut edges: Vec<&MapEdge> = map.edges_of(kind).collect();
        if edges.is_empty() {
            continue;
        }
        edges.sort_by(|a, b| {
            (label(&a.src), label(&a.dst), kind_of(&a.src)).cmp(&(label(&b.src), label(&b.dst), kind_of(&b.src)))
        });
        out.push('\n');
        for e in edges {
            let body = match e.kind {
                EdgeKind::Offering => format!("offers {}", quote(label(&e.dst))),
                EdgeKind::Influence => format!(
                    "influences {} -({})-> {}",
                    quote(label(&e.src)),
                    e.sign.map(Sign::symbol).unwrap_or("o"),
                    quote(label(&e.dst))
                ),
                EdgeKind::Perception => format!(
                    "perceives {} -> {}",
                    quote(label(&e.src)),
                    quote(label(&e.dst))
                ),
            };
            out.push_str(&body);
            let mut attrs = Vec::new();
            if e.saturated {
                attrs.push("saturated");
            }
            if e.kind == EdgeKind::Perception && e.connective == ProblemConnective::WouldLikeTo {
                attrs.push("would-like-to");
            }
            if !attrs.is_empty() {
                out.push_str(&format!(" [{}]", attrs.join(", ")));
            }
            out.push('\n');
        }
    }
    SourceDocument::new(out)
}
