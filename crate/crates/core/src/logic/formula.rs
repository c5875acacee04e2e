use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// One AST node. Children are shared [`Formula`] handles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Top,
    Bot,
    Var(Arc<str>),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
    Box(Formula),
    Dia(Formula),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u64,
    depth: usize,
}

/// A modal formula: a cheaply clonable handle on a shared AST.
///
/// Hashing is O(1) (the structural hash is computed once at construction),
/// and equality short-circuits on shared subtrees.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl Formula {
    fn make(kind: Kind) -> Formula {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        let depth = match &kind {
            Kind::Top | Kind::Bot | Kind::Var(_) => 0,
            Kind::Not(a) | Kind::Box(a) | Kind::Dia(a) => a.depth() + 1,
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => a.depth().max(b.depth()) + 1,
        };
        Formula(Arc::new(Node {
            kind,
            hash: h.finish(),
            depth,
        }))
    }

    pub fn top() -> Formula {
        Formula::make(Kind::Top)
    }

    pub fn bot() -> Formula {
        Formula::make(Kind::Bot)
    }

    pub fn var(name: &str) -> Formula {
        Formula::make(Kind::Var(Arc::from(name)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::make(Kind::Not(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::Or(a, b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::Imp(a, b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::make(Kind::Box(a))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::make(Kind::Dia(a))
    }

    /// `a₁ ∧ … ∧ aₙ`, left-nested; `⊤` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::top(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// `◇ⁿ a`.
    pub fn dia_n(a: Formula, n: usize) -> Formula {
        (0..n).fold(a, |f, _| Formula::dia(f))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// AST depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Variables in first-occurrence order.
    pub fn vars(&self) -> Vec<String> {
        fn go(f: &Formula, out: &mut Vec<String>) {
            match f.kind() {
                Kind::Top | Kind::Bot => {}
                Kind::Var(v) => {
                    if !out.iter().any(|o| o.as_str() == &**v) {
                        out.push(v.to_string());
                    }
                }
                Kind::Not(a) | Kind::Box(a) | Kind::Dia(a) => go(a, out),
                Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Number of AST nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        match self.kind() {
            Kind::Top | Kind::Bot | Kind::Var(_) => 1,
            Kind::Not(a) | Kind::Box(a) | Kind::Dia(a) => 1 + a.size(),
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", format_formula(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_formula(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

// Binding strength used by the printer: larger binds tighter.
const P_IMP: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_UNARY: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f.kind() {
        Kind::Imp(..) => P_IMP,
        Kind::Or(..) => P_OR,
        Kind::And(..) => P_AND,
        _ => P_UNARY,
    }
}

/// Minimal-parenthesis rendering; `parse_formula(format_formula(φ)) == φ`.
pub fn format_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match f.kind() {
        Kind::Top => out.push('T'),
        Kind::Bot => out.push('F'),
        Kind::Var(v) => out.push_str(v),
        Kind::Not(a) => {
            out.push('~');
            write_at(a, P_UNARY, out);
        }
        Kind::Box(a) => {
            out.push_str("[]");
            write_at(a, P_UNARY, out);
        }
        Kind::Dia(a) => {
            out.push_str("<>");
            write_at(a, P_UNARY, out);
        }
        // & and | associate to the left, -> to the right.
        Kind::And(a, b) => {
            write_at(a, P_AND, out);
            out.push_str(" & ");
            write_at(b, P_AND + 1, out);
        }
        Kind::Or(a, b) => {
            write_at(a, P_OR, out);
            out.push_str(" | ");
            write_at(b, P_OR + 1, out);
        }
        Kind::Imp(a, b) => {
            write_at(a, P_IMP + 1, out);
            out.push_str(" -> ");
            write_at(b, P_IMP, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Top,
    Bot,
    Ident(String),
    Not,
    And,
    Or,
    Imp,
    Box,
    Dia,
    LParen,
    RParen,
    Turnstile,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Top => "`T`".into(),
        Tok::Bot => "`F`".into(),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Not => "`~`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Imp => "`->`".into(),
        Tok::Box => "`[]`".into(),
        Tok::Dia => "`<>`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Turnstile => "`|-`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'|' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) != Some(&b'>') => {
                i += 1;
                Tok::Turnstile
            }
            b'|' => Tok::Or,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Imp
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 1;
                Tok::Box
            }
            b'<' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Dia
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                match &src[start..=i] {
                    "T" => Tok::Top,
                    "F" => Tok::Bot,
                    s => Tok::Ident(s.to_string()),
                }
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(err(start, &format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        Error::Parse {
            pos: self.offset(),
            msg: format!("expected {wanted}, found {}", describe(self.peek())),
        }
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Dia => {
                self.bump();
                Ok(Formula::dia(self.unary()?))
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::bot())
            }
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(s) => Ok(Formula::var(&s)),
                _ => unreachable!(),
            },
            Tok::LParen => {
                self.bump();
                let inner = self.imp()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses the ASCII grammar `T F ident ~ & | -> [] <> ( )`.
pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let f = p.imp()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

/// Parses `"phi |- psi"`.
pub fn parse_sequent(src: &str) -> Result<(Formula, Formula)> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let lhs = p.imp()?;
    if *p.peek() != Tok::Turnstile {
        return Err(p.unexpected("`|-`"));
    }
    p.bump();
    let rhs = p.imp()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok((lhs, rhs))
}

pub fn format_sequent(lhs: &Formula, rhs: &Formula) -> String {
    format!("{} |- {}", format_formula(lhs), format_formula(rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn precedence() {
        assert_eq!(
            p("[]p & <>q -> ~r"),
            Formula::imp(
                Formula::and(Formula::boxed(v("p")), Formula::dia(v("q"))),
                Formula::not(v("r"))
            )
        );
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            p("p -> q -> r"),
            Formula::imp(v("p"), Formula::imp(v("q"), v("r")))
        );
    }

    #[test]
    fn conjunction_is_left_associative() {
        assert_eq!(
            p("p & q & r"),
            Formula::and(Formula::and(v("p"), v("q")), v("r"))
        );
    }

    #[test]
    fn error_offset() {
        assert!(matches!(
            parse_formula("p & & q"),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_formula("(p"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_formula("p $"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_formula(""),
            Err(Error::Parse { pos: 0, .. })
        ));
    }

    #[test]
    fn printing() {
        assert_eq!(format_formula(&Formula::boxed(v("p"))), "[]p");
        assert_eq!(
            format_formula(&Formula::and(Formula::or(v("p"), v("q")), v("r"))),
            "(p | q) & r"
        );
        assert_eq!(format_formula(&p("(p -> q) -> r")), "(p -> q) -> r");
        assert_eq!(format_formula(&p("p & (q & r)")), "p & (q & r)");
        assert_eq!(format_formula(&p("~[]<>T")), "~[]<>T");
        assert_eq!(format_formula(&p("~(p & F)")), "~(p & F)");
    }

    #[test]
    fn sequents() {
        let (a, b) = parse_sequent("[]p |- p").unwrap();
        assert_eq!(a, Formula::boxed(v("p")));
        assert_eq!(b, v("p"));
        assert_eq!(
            parse_sequent("p|-q|r").unwrap().1,
            Formula::or(v("q"), v("r"))
        );
        assert!(parse_sequent("p").is_err());
    }

    #[test]
    fn depth_and_vars() {
        let f = p("[](p & q) | r");
        assert_eq!(f.depth(), 3);
        assert_eq!(f.vars(), vec!["p", "q", "r"]);
    }

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::top()),
            Just(Formula::bot()),
            "[pqr]".prop_map(|s| Formula::var(&s)),
            "[a-z][a-z0-9_]{0,3}".prop_map(|s| Formula::var(&s)),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::boxed),
                inner.clone().prop_map(Formula::dia),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn round_trip(f in arb_formula()) {
            prop_assert_eq!(parse_formula(&format_formula(&f)).unwrap(), f);
        }
    }
}
