//! Text form of expressions:
//! `create(<label>,<vid>)`, `union(<e>,<e>)`, `relabel(<label>,<label>,<e>)`,
//! `join(<label>,<label>,<e>)`, with labels `int:<n>` or `tag:<name>.<phase>`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::{CwdExpr, Label, Phase};

/// Canonical text, no whitespace.
pub fn serialize(e: &CwdExpr) -> String {
    enum Work<'a> {
        Node(&'a CwdExpr),
        Lit(&'static str),
    }
    let mut out = String::new();
    let mut stack = alloc::vec![Work::Node(e)];
    while let Some(w) = stack.pop() {
        match w {
            Work::Lit(s) => out.push_str(s),
            Work::Node(CwdExpr::Create { label, vertex }) => {
                let _ = write!(out, "create({label},{vertex})");
            }
            Work::Node(CwdExpr::Union(l, r)) => {
                out.push_str("union(");
                stack.extend([Work::Lit(")"), Work::Node(r), Work::Lit(","), Work::Node(l)]);
            }
            Work::Node(CwdExpr::Relabel { from, to, child }) => {
                let _ = write!(out, "relabel({from},{to},");
                stack.extend([Work::Lit(")"), Work::Node(child)]);
            }
            Work::Node(CwdExpr::Join { a, b, child }) => {
                let _ = write!(out, "join({a},{b},");
                stack.extend([Work::Lit(")"), Work::Node(child)]);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        ParseError { offset: self.pos, line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(x) => Err(self.error(alloc::format!("expected '{c}', found '{x}'"))),
            None => Err(self.error(alloc::format!("expected '{c}', found end of input"))),
        }
    }

    /// A maximal run of characters from `[A-Za-z0-9_:.]`.
    fn word(&mut self) -> &str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len =
            rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == ':' || c == '.')).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let start = self.pos;
        let w = self.word().to_string();
        parse_label(&w).map_err(|m| {
            let mut c = Cursor { src: self.src, pos: start };
            c.skip_ws();
            c.error(m)
        })
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let w = self.word().to_string();
        w.parse().map_err(|_| {
            let mut c = Cursor { src: self.src, pos: start };
            c.skip_ws();
            c.error(alloc::format!("expected a vertex id, found '{w}'"))
        })
    }
}

/// Parse a single label.
pub fn parse_label(s: &str) -> Result<Label, String> {
    if let Some(n) = s.strip_prefix("int:") {
        return n.parse().map(Label::Int).map_err(|_| alloc::format!("bad integer label '{s}'"));
    }
    if let Some(rest) = s.strip_prefix("tag:") {
        let (set, phase) = rest.rsplit_once('.').ok_or_else(|| alloc::format!("tag label '{s}' lacks a phase"))?;
        let phase = match phase {
            "new" => Phase::New,
            "new2" => Phase::New2,
            "old" => Phase::Old,
            other => return Err(alloc::format!("unknown phase '{other}'")),
        };
        if set.is_empty() || !set.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(alloc::format!("bad set name in '{s}'"));
        }
        return Ok(Label::tag(set, phase));
    }
    Err(alloc::format!("expected a label, found '{s}'"))
}

enum Frame {
    UnionLeft,
    UnionRight(CwdExpr),
    Relabel(Label, Label),
    Join(Label, Label),
}

/// Parse an expression. Whitespace is allowed between tokens.
pub fn parse(src: &str) -> Result<CwdExpr, ParseError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut frames: Vec<Frame> = Vec::new();
    loop {
        // Descend until a leaf is produced.
        let mut node = loop {
            let at = cur.pos;
            let kw = cur.word().to_string();
            match kw.as_str() {
                "create" => {
                    cur.expect('(')?;
                    let label = cur.label()?;
                    cur.expect(',')?;
                    let vertex = cur.number()?;
                    cur.expect(')')?;
                    break CwdExpr::Create { label, vertex };
                }
                "union" => {
                    cur.expect('(')?;
                    frames.push(Frame::UnionLeft);
                }
                "relabel" | "join" => {
                    cur.expect('(')?;
                    let a = cur.label()?;
                    cur.expect(',')?;
                    let b_at = cur.pos;
                    let b = cur.label()?;
                    cur.expect(',')?;
                    if kw == "join" {
                        if a == b {
                            let mut c = Cursor { src, pos: b_at };
                            c.skip_ws();
                            return Err(c.error("join needs two distinct labels"));
                        }
                        frames.push(Frame::Join(a, b));
                    } else {
                        frames.push(Frame::Relabel(a, b));
                    }
                }
                _ => {
                    let mut c = Cursor { src, pos: at };
                    c.skip_ws();
                    return Err(if kw.is_empty() {
                        c.error("expected an expression")
                    } else {
                        c.error(alloc::format!("unknown operation '{kw}'"))
                    });
                }
            }
        };
        // Climb while frames can be closed.
        loop {
            match frames.pop() {
                None => {
                    if cur.peek().is_some() {
                        return Err(cur.error("trailing input"));
                    }
                    return Ok(node);
                }
                Some(Frame::UnionLeft) => {
                    cur.expect(',')?;
                    frames.push(Frame::UnionRight(node));
                    break;
                }
                Some(Frame::UnionRight(left)) => {
                    cur.expect(')')?;
                    node = CwdExpr::Union(Box::new(left), Box::new(node));
                }
                Some(Frame::Relabel(from, to)) => {
                    cur.expect(')')?;
                    node = CwdExpr::Relabel { from, to, child: Box::new(node) };
                }
                Some(Frame::Join(a, b)) => {
                    cur.expect(')')?;
                    node = CwdExpr::Join { a, b, child: Box::new(node) };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P3: &str =
        "join(int:2,int:3,union(join(int:1,int:2,union(create(int:1,1),create(int:2,2))),create(int:3,3)))";

    #[test]
    fn round_trip() {
        let e = parse(P3).unwrap();
        assert_eq!(serialize(&e), P3);
        assert_eq!(parse(&serialize(&e)).unwrap(), e);
    }

    #[test]
    fn whitespace_is_ignored() {
        let spaced = " join ( int:2 ,int:3,\n union( join(int:1, int:2, union(create(int:1, 1), create(int:2,2))) ,\tcreate(int:3,3) ) ) ";
        assert_eq!(serialize(&parse(spaced).unwrap()), P3);
    }

    #[test]
    fn tag_labels() {
        let e = parse("relabel(tag:x1.new,tag:x1.old,create(tag:x1.new,4))").unwrap();
        assert_eq!(e.width(), 2);
        assert_eq!(parse_label("tag:y2.new2").unwrap(), Label::tag("y2", Phase::New2));
        assert!(parse_label("tag:y2.mid").is_err());
    }

    #[test]
    fn diagnostics() {
        let err = parse("join(int:1,create(int:1,0))").unwrap_err();
        assert_eq!((err.line, err.column), (1, 12));
        let err = parse("union(create(int:1,0),\n  bogus(1))").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        assert!(parse("join(int:1,int:1,create(int:1,0))").is_err());
        assert!(parse("create(int:1,0) x").is_err());
        assert!(parse("").is_err());
    }
}
