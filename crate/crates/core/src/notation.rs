//! 1-based cycle notation.
//!
//! ```text
//! perm  := cycle+ [ "@" int ]
//! cycle := "(" [ int ( ("," | " ") int )* ] ")"
//! list  := perm ( ";" perm )*
//! ```
//!
//! Cycles need not be disjoint and are multiplied left to right. The degree
//! is the largest point unless an `@n` suffix pads it.

use crate::error::{Error, Result};
use crate::perm::{Permutation, MAX_DEGREE};

struct Parsed {
    cycles: Vec<Vec<usize>>,
    max_point: usize,
    degree: Option<usize>,
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    offset: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at(&self) -> usize {
        self.offset + self.pos
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(self.at(), "expected a point number"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse::<usize>()
            .map_err(|_| err(self.offset + start, format!("number `{text}` is too large")))
    }
}

fn parse_one(text: &str, offset: usize) -> Result<Parsed> {
    let mut c = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
        offset,
    };
    let mut cycles = Vec::new();
    let mut max_point = 0;
    let mut degree = None;
    c.skip_ws();
    if c.peek().is_none() {
        return Err(err(c.at(), "empty permutation"));
    }
    loop {
        c.skip_ws();
        match c.peek() {
            None => break,
            Some(b'(') => {
                c.pos += 1;
                let mut cycle: Vec<usize> = Vec::new();
                c.skip_ws();
                if c.peek() != Some(b')') {
                    loop {
                        c.skip_ws();
                        let at = c.at();
                        let point = c.number()?;
                        if point == 0 {
                            return Err(err(at, "points are numbered from 1"));
                        }
                        if point > MAX_DEGREE {
                            return Err(err(at, format!("point {point} exceeds {MAX_DEGREE}")));
                        }
                        if cycle.contains(&(point - 1)) {
                            return Err(err(at, format!("point {point} repeated within a cycle")));
                        }
                        max_point = max_point.max(point);
                        cycle.push(point - 1);
                        let had_space = c.peek().is_some_and(|b| b.is_ascii_whitespace());
                        c.skip_ws();
                        match c.peek() {
                            Some(b',') => c.pos += 1,
                            Some(b')') => break,
                            Some(b) if b.is_ascii_digit() && had_space => {}
                            Some(b) => {
                                return Err(err(c.at(), format!("unexpected `{}`", b as char)));
                            }
                            None => return Err(err(c.at(), "unclosed cycle")),
                        }
                    }
                }
                c.pos += 1;
                cycles.push(cycle);
            }
            Some(b'@') => {
                c.pos += 1;
                c.skip_ws();
                let at = c.at();
                let n = c.number()?;
                if n > MAX_DEGREE {
                    return Err(err(at, format!("degree {n} exceeds {MAX_DEGREE}")));
                }
                degree = Some(n);
                c.skip_ws();
                if let Some(b) = c.peek() {
                    return Err(err(c.at(), format!("unexpected `{}` after degree", b as char)));
                }
                break;
            }
            Some(b) => return Err(err(c.at(), format!("unexpected `{}`", b as char))),
        }
    }
    if cycles.is_empty() {
        return Err(err(offset, "expected at least one cycle"));
    }
    if let Some(n) = degree {
        if max_point > n {
            return Err(err(offset, format!("point {max_point} exceeds the declared degree {n}")));
        }
    }
    Ok(Parsed {
        cycles,
        max_point,
        degree,
    })
}

/// Parses one permutation, e.g. `(1,2,3)(4,5)@6`.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let parsed = parse_one(text, 0)?;
    let n = parsed.degree.unwrap_or(parsed.max_point);
    Permutation::from_cycles(n, &parsed.cycles)
}

/// Parses `;`-separated permutations sharing one degree: the largest `@n`
/// given, or else the largest point.
pub fn parse_generators(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut parsed = Vec::new();
    let mut offset = 0;
    for piece in text.split(';') {
        parsed.push(parse_one(piece, offset)?);
        offset += piece.len() + 1;
    }
    let max_point = parsed.iter().map(|p| p.max_point).max().unwrap_or(0);
    let declared = parsed.iter().filter_map(|p| p.degree).max();
    let n = declared.unwrap_or(max_point);
    if max_point > n {
        return Err(err(0, format!("point {max_point} exceeds the declared degree {n}")));
    }
    let perms = parsed
        .iter()
        .map(|p| Permutation::from_cycles(n, &p.cycles))
        .collect::<Result<Vec<_>>>()?;
    Ok((n, perms))
}

/// 1-based cycle notation with comma separators; `()` for the identity.
pub fn format_permutation(p: &Permutation) -> String {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return "()".into();
    }
    cycles
        .iter()
        .map(|c| {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            format!("({})", pts.join(","))
        })
        .collect()
}
