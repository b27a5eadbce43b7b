//! Tiny arithmetic grammar for angles and parameters written in scenario
//! files: decimals, `pi`, `+ - * /`, parentheses and implicit products such
//! as `3pi/4`.

use std::f64::consts::PI;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64, String> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<f64, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc *= self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc /= self.unary()?;
                }
                // implicit product: `3pi`, `2(pi/3)`
                Some(b'p' | b'(') => acc *= self.unary()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'p') => {
                if self.src[self.pos..].starts_with(b"pi") {
                    self.pos += 2;
                    Ok(PI)
                } else {
                    Err(format!("unexpected input at offset {}", self.pos))
                }
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' => self.number(),
            Some(ch) => Err(format!("unexpected `{}` at offset {}", ch as char, self.pos)),
            None => Err("unexpected end of expression".into()),
        }
    }

    fn number(&mut self) -> Result<f64, String> {
        let start = self.pos;
        let s = self.src;
        while self.pos < s.len() && (s[self.pos].is_ascii_digit() || s[self.pos] == b'.') {
            self.pos += 1;
        }
        // exponent part, e.g. 1e-3
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < s.len() && (s[self.pos] == b'+' || s[self.pos] == b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < s.len() && s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if digits == self.pos {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).expect("ascii slice");
        text.parse::<f64>().map_err(|e| format!("bad number `{text}`: {e}"))
    }
}

/// Evaluates a real-valued expression such as `-pi/4` or `0.25`.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let mut p = Parser {
        src: text.trim().as_bytes(),
        pos: 0,
    };
    if p.src.is_empty() {
        return Err("empty expression".into());
    }
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(format!("trailing input at offset {}", p.pos));
    }
    if !v.is_finite() {
        return Err(format!("expression `{}` is not finite", text.trim()));
    }
    Ok(v)
}
