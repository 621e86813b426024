//! Recursive-descent parser for scheme text.
//!
//! ```text
//! scheme := '<' [items] '>' | '<' copies '(' INT ',' INT ')' ':' zones '>'
//! items  := item (('+' | ',' | '⊔') item)*
//! item   := 'J' | NAT | NAT '<' items '>'
//! zones  := items? ('|' items?)*
//! ```

use super::{Ambient, Forest, OvalNode, RealScheme, SchemeError, TorusClass};

/// Upper limit on the number of ovals a single scheme text may expand to.
pub const MAX_OVALS: usize = 100_000;
const MAX_DEPTH: usize = 512;

enum Item {
    PseudoLine,
    Ovals(usize, OvalNode),
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    ovals: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error<T>(&self, at: usize, message: impl Into<String>) -> Result<T, SchemeError> {
        Err(SchemeError::Syntax {
            position: at,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: char) -> Result<(), SchemeError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.error(self.pos, format!("expected '{want}', found '{c}'")),
            None => self.error(self.pos, format!("expected '{want}', found end of input")),
        }
    }

    fn expect_end(&mut self) -> Result<(), SchemeError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(self.pos, format!("unexpected '{c}' after the scheme")),
        }
    }

    fn nat(&mut self) -> Result<u64, SchemeError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = match value.checked_mul(10).and_then(|v| v.checked_add(u64::from(d))) {
                Some(v) => v,
                None => return self.error(start, "number too large"),
            };
            self.bump();
        }
        if self.pos == start {
            return self.error(start, "expected a number");
        }
        Ok(value)
    }

    fn int(&mut self) -> Result<i64, SchemeError> {
        self.skip_ws();
        let start = self.pos;
        let negative = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let magnitude = self.nat()?;
        let Ok(magnitude) = i64::try_from(magnitude) else {
            return self.error(start, "number too large");
        };
        Ok(if negative { -magnitude } else { magnitude })
    }

    fn count_ovals(&mut self, at: usize, extra: Option<usize>) -> Result<(), SchemeError> {
        match extra.and_then(|e| self.ovals.checked_add(e)) {
            Some(total) if total <= MAX_OVALS => {
                self.ovals = total;
                Ok(())
            }
            _ => self.error(at, format!("scheme exceeds {MAX_OVALS} ovals")),
        }
    }

    /// Parses a possibly empty item list, stopping before `>` or `|`.
    fn items(&mut self, depth: usize) -> Result<Vec<(usize, Item)>, SchemeError> {
        let mut out = Vec::new();
        self.skip_ws();
        if matches!(self.peek(), None | Some('>') | Some('|')) {
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let at = self.pos;
            out.push((at, self.item(depth)?));
            self.skip_ws();
            match self.peek() {
                Some('+') | Some(',') | Some('⊔') => self.bump(),
                _ => break,
            }
        }
        Ok(out)
    }

    fn item(&mut self, depth: usize) -> Result<Item, SchemeError> {
        let at = self.pos;
        match self.peek() {
            Some('J') => {
                if depth > 0 {
                    return self.error(at, "the pseudo-line cannot lie inside an oval");
                }
                self.bump();
                Ok(Item::PseudoLine)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = usize::try_from(self.nat()?).unwrap_or(usize::MAX);
                self.skip_ws();
                if self.peek() != Some('<') {
                    self.count_ovals(at, Some(k))?;
                    return Ok(Item::Ovals(k, OvalNode::empty()));
                }
                if k == 0 {
                    return self.error(at, "a nest needs a positive count");
                }
                if depth + 1 > MAX_DEPTH {
                    return self.error(at, "nesting too deep");
                }
                self.bump();
                let before = self.ovals;
                let inner = self.items(depth + 1)?;
                self.expect('>')?;
                let children = expand(inner);
                let node = OvalNode::nest(children);
                // `inner` already counted the children once.
                self.ovals = before;
                self.count_ovals(at, k.checked_mul(node.size()))?;
                Ok(Item::Ovals(k, node))
            }
            Some(c) => self.error(at, format!("expected 'J' or a count, found '{c}'")),
            None => self.error(at, "unexpected end of input"),
        }
    }

    /// Lookahead for `copies (`; restores the cursor when absent.
    fn torus_header(&mut self) -> Result<Option<(u64, i64, i64)>, SchemeError> {
        let save = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok(None);
        }
        let copies = self.nat()?;
        self.skip_ws();
        if self.peek() != Some('(') {
            self.pos = save;
            return Ok(None);
        }
        self.bump();
        let alpha = self.int()?;
        self.expect(',')?;
        let beta = self.int()?;
        self.expect(')')?;
        self.expect(':')?;
        Ok(Some((copies, alpha, beta)))
    }
}

fn expand(items: Vec<(usize, Item)>) -> Vec<OvalNode> {
    let mut out = Vec::new();
    for (_, item) in items {
        if let Item::Ovals(k, node) = item {
            out.extend(std::iter::repeat_n(node, k));
        }
    }
    out
}

fn pseudo_lines(items: &[(usize, Item)]) -> Vec<usize> {
    items
        .iter()
        .filter(|(_, i)| matches!(i, Item::PseudoLine))
        .map(|(at, _)| *at)
        .collect()
}

pub(super) fn parse(text: &str, ambient: Ambient) -> Result<RealScheme, SchemeError> {
    let mut c = Cursor {
        chars: text.chars().collect(),
        pos: 0,
        ovals: 0,
    };
    c.expect('<')?;
    c.skip_ws();
    if let Some((copies, alpha, beta)) = c.torus_header()? {
        let mut zones = Vec::new();
        loop {
            let items = c.items(0)?;
            if let Some(&at) = pseudo_lines(&items).first() {
                return c.error(at, "the pseudo-line does not occur on the hyperboloid");
            }
            zones.push(Forest::new(expand(items)));
            c.skip_ws();
            if c.peek() == Some('|') {
                c.bump();
            } else {
                break;
            }
        }
        c.expect('>')?;
        c.expect_end()?;
        if ambient != Ambient::Hyperboloid {
            return Err(SchemeError::AmbientMismatch {
                ambient,
                reason: "torus classes only occur on the hyperboloid".into(),
            });
        }
        if zones.len() == 1 && zones[0].is_empty() {
            zones.clear();
        }
        return RealScheme::hyperboloid(
            TorusClass {
                alpha,
                beta,
                copies,
            },
            zones,
        );
    }

    let items = c.items(0)?;
    c.expect('>')?;
    c.expect_end()?;
    let lines = pseudo_lines(&items);
    if lines.len() > 1 {
        return c.error(lines[1], "at most one pseudo-line");
    }
    let has_line = !lines.is_empty();
    let forest = Forest::new(expand(items));
    let mismatch = |reason: &str| {
        Err(SchemeError::AmbientMismatch {
            ambient,
            reason: reason.into(),
        })
    };
    match ambient {
        Ambient::ProjectivePlaneOdd if has_line => Ok(RealScheme::projective_odd(forest)),
        Ambient::ProjectivePlaneOdd => mismatch("an odd-degree curve has a pseudo-line J"),
        Ambient::ProjectivePlaneEven if has_line => {
            mismatch("an even-degree curve has no pseudo-line")
        }
        Ambient::ProjectivePlaneEven => Ok(RealScheme::projective_even(forest)),
        Ambient::Ellipsoid if has_line => mismatch("curves on the ellipsoid have no pseudo-line"),
        Ambient::Ellipsoid => Ok(RealScheme::ellipsoid(forest)),
        Ambient::Hyperboloid => mismatch("hyperboloid schemes take the form <k(a,b): zones>"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syntax_at(text: &str) -> usize {
        match parse(text, Ambient::ProjectivePlaneOdd) {
            Err(SchemeError::Syntax { position, .. }) => position,
            other => panic!("expected a syntax error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn separators_are_synonyms() {
        let a = parse("<J + 2 + 1<1>>", Ambient::ProjectivePlaneOdd).unwrap();
        let b = parse("<J, 1<1>, 1, 1>", Ambient::ProjectivePlaneOdd).unwrap();
        let c = parse("<J ⊔ 2 ⊔ 1<1>>", Ambient::ProjectivePlaneOdd).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn zero_means_no_ovals() {
        let s = parse("<J + 0>", Ambient::ProjectivePlaneOdd).unwrap();
        assert_eq!(s.oval_count(), 0);
        assert_eq!(syntax_at("<J + 0<1>>"), 5);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(syntax_at("J>"), 0);
        assert_eq!(syntax_at("<J + >"), 5);
        assert_eq!(syntax_at("<J + 1<J>>"), 7);
        assert_eq!(syntax_at("<J + J>"), 5);
        assert_eq!(syntax_at("<J + 1<1>"), 9);
        assert_eq!(syntax_at("<J> x"), 4);
        assert_eq!(syntax_at("<J + 99999999999999999999>"), 5);
    }

    #[test]
    fn oval_cap() {
        let text = format!("<J + {}>", MAX_OVALS + 1);
        assert!(matches!(
            parse(&text, Ambient::ProjectivePlaneOdd),
            Err(SchemeError::Syntax { .. })
        ));
        let text = "<J + 1000<1000<1>>>";
        assert!(matches!(
            parse(text, Ambient::ProjectivePlaneOdd),
            Err(SchemeError::Syntax { .. })
        ));
    }

    #[test]
    fn ambient_checks() {
        let mismatch = |t: &str, a: Ambient| {
            matches!(parse(t, a), Err(SchemeError::AmbientMismatch { .. }))
        };
        assert!(mismatch("<3>", Ambient::ProjectivePlaneOdd));
        assert!(mismatch("<J>", Ambient::ProjectivePlaneEven));
        assert!(mismatch("<J + 1>", Ambient::Ellipsoid));
        assert!(mismatch("<1>", Ambient::Hyperboloid));
        assert!(mismatch("<1(1,1): 1>", Ambient::Ellipsoid));
        assert!(mismatch("<1(2,1): 1>", Ambient::Hyperboloid));
        assert!(mismatch("<1(3,3): 1>", Ambient::Hyperboloid));
        assert!(mismatch("<0(1,1):>", Ambient::Hyperboloid));
        assert!(mismatch("<2(1,1): 1 | 1 | 1>", Ambient::Hyperboloid));
    }

    #[test]
    fn torus_header_accepts_signs() {
        let s = parse("<1(-1, 3): 1>", Ambient::Hyperboloid).unwrap();
        let t = s.torus().unwrap();
        assert_eq!((t.alpha, t.beta, t.copies), (1, -3, 1));
    }
}
