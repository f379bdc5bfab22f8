//! Parsing of the element syntax produced by `Display for GroupElement`.

use super::descriptor::GroupDescriptor;
use super::element::{FreeWord, GroupElement, WreathElement};
use crate::error::{Error, Result};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{what} at offset {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        )))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{}`", c as char))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .map_or_else(|| self.err("expected integer"), Ok)
    }

    /// `(x,y,..)`, or a bare integer when `dim == 1`.
    fn tuple(&mut self, dim: usize) -> Result<Vec<i64>> {
        if !self.eat(b'(') {
            if dim == 1 {
                return Ok(vec![self.int()?]);
            }
            return self.err("expected tuple");
        }
        let mut v = Vec::with_capacity(dim);
        loop {
            v.push(self.int()?);
            if !self.eat(b',') {
                break;
            }
        }
        self.expect(b')')?;
        if v.len() != dim {
            return self.err(&format!("expected {dim} coordinates"));
        }
        Ok(v)
    }

    fn element(&mut self, desc: &GroupDescriptor) -> Result<GroupElement> {
        match desc {
            GroupDescriptor::Lattice { dim } => Ok(GroupElement::Lattice(self.tuple(*dim)?)),
            GroupDescriptor::Finite(g) => {
                self.eat(b'#');
                let k = self.int()?;
                if k < 0 || k as usize >= g.order() {
                    return self.err("finite element index out of range");
                }
                Ok(GroupElement::Finite(k as usize))
            }
            GroupDescriptor::Free { rank } => {
                if self.eat(b'e') {
                    return Ok(GroupElement::Free(FreeWord::identity()));
                }
                let mut letters = Vec::new();
                while matches!(self.peek(), Some(b'+') | Some(b'-')) {
                    let l = self.int()?;
                    if l == 0 || l.unsigned_abs() as usize > *rank {
                        return self.err("free letter out of range");
                    }
                    letters.push(l as i32);
                }
                if letters.is_empty() {
                    return self.err("expected signed letters or `e`");
                }
                Ok(GroupElement::Free(FreeWord::from_letters(letters).unwrap()))
            }
            GroupDescriptor::Wreath { base_dim, lamp } => {
                let base = self.tuple(*base_dim)?;
                let mut lamps = Vec::new();
                if self.eat(b'[') {
                    if !self.eat(b']') {
                        loop {
                            let site = self.tuple(*base_dim)?;
                            self.expect(b':')?;
                            let v = self.element(lamp)?;
                            lamps.push((site, v));
                            if !self.eat(b',') {
                                break;
                            }
                        }
                        self.expect(b']')?;
                    }
                }
                let id = lamp.identity();
                let mut sites: Vec<_> = lamps.iter().map(|(s, _)| s.clone()).collect();
                sites.sort();
                sites.dedup();
                if sites.len() != lamps.len() {
                    return self.err("repeated lamp site");
                }
                Ok(GroupElement::Wreath(WreathElement::new(base, lamps, &id)))
            }
        }
    }
}

/// Parses an element of `desc` from its textual form.
pub fn parse_element(desc: &GroupDescriptor, s: &str) -> Result<GroupElement> {
    let mut c = Cursor { s: s.as_bytes(), pos: 0 };
    let x = c.element(desc)?;
    if c.peek().is_some() {
        return c.err("trailing input");
    }
    Ok(x)
}
