//! Text form of a group specification.
//!
//! ```text
//! spec     := body suffix*
//! body     := factor ('x' factor)* ('+T' int)? | 'T' int
//! factor   := [A-G] int
//! suffix   := '@res=' int | '@relative=' path      (path runs to the end)
//! ```
//!
//! Examples: `A2`, `A1xA1+T1`, `D3xA1+T2`, `A1@res=3`, `D2@relative=so31.json`.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::invariants::GroupSpec;
use crate::root_datum::{Series, SimpleType};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, at: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.base + at,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self, what: &str) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(start, format!("expected {what}")));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.err(start, format!("{what} is too large")))
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let trimmed = text.trim_start();
    let base = text.len() - trimmed.len();
    let trimmed = trimmed.trim_end();
    let mut c = Cursor {
        text: trimmed,
        pos: 0,
        base,
    };
    if trimmed.is_empty() {
        return Err(c.err(0, "empty group specification"));
    }

    let mut factors = Vec::new();
    let mut torus_rank = 0usize;
    if c.peek() == Some(b'T') {
        c.pos += 1;
        torus_rank = c.int("torus rank")? as usize;
        if torus_rank == 0 {
            return Err(c.err(1, "a bare torus needs rank at least 1"));
        }
    } else {
        loop {
            let at = c.pos;
            let series = c
                .peek()
                .and_then(|b| Series::from_char(b as char))
                .ok_or_else(|| c.err(at, "expected a series letter A-G"))?;
            c.pos += 1;
            let rank = c.int("rank")? as usize;
            let t = SimpleType::new(series, rank)
                .map_err(|e| c.err(at, format!("bad factor {series}{rank}: {e}")))?;
            factors.push(t);
            if !c.eat("x") {
                break;
            }
        }
        if c.eat("+") {
            if !c.eat("T") {
                return Err(c.err(c.pos, "expected 'T' after '+'"));
            }
            torus_rank = c.int("torus rank")? as usize;
        }
    }

    let mut spec = GroupSpec::new(factors, torus_rank);
    let mut seen_res = false;
    while c.pos < trimmed.len() {
        let at = c.pos;
        if c.eat("@res=") {
            if seen_res {
                return Err(c.err(at, "restriction degree given twice"));
            }
            seen_res = true;
            let num_at = c.pos;
            let n = c.int("restriction degree")?;
            if n == 0 || n > u32::MAX as u64 {
                return Err(c.err(num_at, "restriction degree must be a positive 32-bit integer"));
            }
            spec.restriction_degree = n as u32;
        } else if c.eat("@relative=") {
            let path = &trimmed[c.pos..];
            if path.is_empty() {
                return Err(c.err(c.pos, "expected a path after '@relative='"));
            }
            spec.relative_path = Some(PathBuf::from(path));
            c.pos = trimmed.len();
        } else {
            return Err(c.err(at, "unexpected input; expected '@res=' or '@relative='"));
        }
    }
    Ok(spec)
}

/// Canonical text of a specification; parsing it gives the same spec back.
pub fn render_group_spec(spec: &GroupSpec) -> String {
    let mut out = if spec.factors.is_empty() {
        format!("T{}", spec.torus_rank)
    } else {
        let body: Vec<String> = spec.factors.iter().map(ToString::to_string).collect();
        let mut s = body.join("x");
        if spec.torus_rank > 0 {
            s.push_str(&format!("+T{}", spec.torus_rank));
        }
        s
    };
    if spec.restriction_degree > 1 {
        out.push_str(&format!("@res={}", spec.restriction_degree));
    }
    if let Some(p) = &spec.relative_path {
        out.push_str(&format!("@relative={}", p.display()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset(text: &str) -> usize {
        match parse_group_spec(text) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{text:?} parsed: {other:?}"),
        }
    }

    #[test]
    fn examples() {
        let g = parse_group_spec("A2").unwrap();
        assert_eq!(g.factors.len(), 1);
        assert_eq!((g.torus_rank, g.restriction_degree), (0, 1));
        let g = parse_group_spec("A1@res=3").unwrap();
        assert_eq!(g.restriction_degree, 3);
        let g = parse_group_spec("D3xA1+T2").unwrap();
        assert_eq!(g.factors.len(), 2);
        assert_eq!(g.torus_rank, 2);
        let g = parse_group_spec("T3").unwrap();
        assert!(g.factors.is_empty());
        let g = parse_group_spec("D2@res=2@relative=data/so31.json").unwrap();
        assert_eq!(g.relative_path, Some(PathBuf::from("data/so31.json")));
    }

    #[test]
    fn round_trip() {
        for text in ["A2", "A1xA1+T1", "D3xA1+T2", "E8", "T2", "B3xG2@res=4", "A1@relative=x.json"] {
            let g = parse_group_spec(text).unwrap();
            assert_eq!(render_group_spec(&g), text);
            assert_eq!(parse_group_spec(&render_group_spec(&g)).unwrap(), g);
        }
        assert_eq!(render_group_spec(&parse_group_spec("A1+T0@res=1").unwrap()), "A1");
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(offset("H2"), 0);
        assert_eq!(offset("A2xE5"), 3);
        assert_eq!(offset("A2x"), 3);
        assert_eq!(offset("A2+S1"), 3);
        assert_eq!(offset("A2@res=0"), 7);
        assert_eq!(offset("A2@foo"), 2);
        assert_eq!(offset("  A"), 3);
        assert_eq!(offset(""), 0);
        assert_eq!(offset("D1"), 0);
    }
}
