//! Recursive-descent parser for the scalar expression grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' nonneg-integer)?
//! atom   := integer | ident | func '(' expr ')' | '(' expr ')' | '-' factor
//! ```
//!
//! `mom(i,lam)` and `jet(a,lam)` are resolved by role, so `mom(y,x)` and
//! `p_y` name the same coordinate on a one-dimensional base.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::coord::{CoordId, Role};
use super::poly::Func;
use super::scalar::Scalar;
use super::ExprError;

/// Name and role lookup for the coordinates an expression may mention.
pub trait CoordLookup {
    fn by_name(&self, name: &str) -> Option<CoordId>;
    fn by_role(&self, role: &Role) -> Option<CoordId>;
}

/// Coordinates plus named macros such as `rho`.
pub struct Scope<'a> {
    coords: &'a dyn CoordLookup,
    macros: BTreeMap<String, Scalar>,
}

impl<'a> Scope<'a> {
    pub fn new(coords: &'a dyn CoordLookup) -> Self {
        Scope {
            coords,
            macros: BTreeMap::new(),
        }
    }

    pub fn with_macro(mut self, name: &str, value: Scalar) -> Self {
        self.macros.insert(name.to_string(), value);
        self
    }
}

pub fn parse_scalar(text: &str, coords: &dyn CoordLookup) -> Result<Scalar, ExprError> {
    parse_in_scope(text, &Scope::new(coords))
}

pub fn parse_in_scope(text: &str, scope: &Scope<'_>) -> Result<Scalar, ExprError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        scope,
        end: text.chars().count(),
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(ExprError::Syntax {
            pos: t.pos,
            message: format!("unexpected {}", t.kind.describe()),
        }),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Int(n) => format!("number '{n}'"),
            TokenKind::Ident(s) => format!("identifier '{s}'"),
            TokenKind::Sym(c) => format!("'{c}'"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                kind: TokenKind::Int(s.parse().expect("digits")),
                pos: start,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Ident(chars[start..i].iter().collect()),
                pos: start,
            });
        } else if "+-*/^(),".contains(c) {
            out.push(Token {
                kind: TokenKind::Sym(c),
                pos: i,
            });
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                pos: i,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'s, 'a> {
    tokens: Vec<Token>,
    pos: usize,
    scope: &'s Scope<'a>,
    end: usize,
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Sym(s), .. }) if *s == c)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ExprError> {
        if self.peek_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            let found = self
                .peek()
                .map(|t| t.kind.describe())
                .unwrap_or_else(|| "end of input".to_string());
            Err(ExprError::Syntax {
                pos: self.here(),
                message: format!("expected '{c}', found {found}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Scalar, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.peek_sym('+') {
                self.pos += 1;
                acc = acc + self.term()?;
            } else if self.peek_sym('-') {
                self.pos += 1;
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ExprError> {
        let mut acc = self.factor()?;
        loop {
            if self.peek_sym('*') {
                self.pos += 1;
                acc = acc * self.factor()?;
            } else if self.peek_sym('/') {
                self.pos += 1;
                let d = self.factor()?;
                acc = acc.checked_div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ExprError> {
        let base = self.atom()?;
        if self.peek_sym('^') {
            self.pos += 1;
            let pos = self.here();
            match self.peek().cloned() {
                Some(Token {
                    kind: TokenKind::Int(n),
                    ..
                }) => {
                    self.pos += 1;
                    let e = n.to_u32().ok_or(ExprError::Syntax {
                        pos,
                        message: "exponent too large".into(),
                    })?;
                    Ok(base.pow(e))
                }
                _ => Err(ExprError::Syntax {
                    pos,
                    message: "expected a nonnegative integer exponent".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Scalar, ExprError> {
        let pos = self.here();
        let tok = self.peek().cloned().ok_or(ExprError::Syntax {
            pos,
            message: "unexpected end of input".into(),
        })?;
        match tok.kind {
            TokenKind::Int(n) => {
                self.pos += 1;
                Ok(Scalar::from_bigint(n))
            }
            TokenKind::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            TokenKind::Sym('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            TokenKind::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    if self.tokens.get(self.pos + 1).map(|t| &t.kind) == Some(&TokenKind::Sym('('))
                    {
                        self.pos += 2;
                        let arg = self.expr()?;
                        self.expect_sym(')')?;
                        return Ok(Scalar::apply(func, arg));
                    }
                }
                if let Some(v) = self.scope.macros.get(&name) {
                    self.pos += 1;
                    return Ok(v.clone());
                }
                let c = self.coord_ref()?;
                Ok(Scalar::coord(&c))
            }
            TokenKind::Sym(c) => Err(ExprError::Syntax {
                pos,
                message: format!("unexpected '{c}'"),
            }),
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ExprError> {
        let pos = self.here();
        match self.peek().cloned() {
            Some(Token {
                kind: TokenKind::Ident(s),
                ..
            }) => {
                self.pos += 1;
                Ok((s, pos))
            }
            _ => Err(ExprError::Syntax {
                pos,
                message: "expected an identifier".into(),
            }),
        }
    }

    fn named(&self, name: &str, pos: usize) -> Result<CoordId, ExprError> {
        self.scope
            .coords
            .by_name(name)
            .ok_or_else(|| ExprError::UnknownIdentifier {
                name: name.to_string(),
                pos,
            })
    }

    fn base_index(&mut self) -> Result<usize, ExprError> {
        let (name, pos) = self.ident()?;
        let c = self.named(&name, pos)?;
        c.base_index().ok_or(ExprError::Syntax {
            pos,
            message: format!("'{name}' is not a base coordinate"),
        })
    }

    fn by_role(&self, role: Role, shown: String, pos: usize) -> Result<CoordId, ExprError> {
        self.scope
            .coords
            .by_role(&role)
            .ok_or(ExprError::UnknownIdentifier { name: shown, pos })
    }

    /// A coordinate: plain name, `mom(i,lam)` or `jet(a,lam)`.
    fn coord_ref(&mut self) -> Result<CoordId, ExprError> {
        let (name, pos) = self.ident()?;
        let call = self.peek_sym('(');
        match name.as_str() {
            "mom" if call => {
                self.pos += 1;
                let (fname, fpos) = self.ident()?;
                let fiber = match self.named(&fname, fpos)?.role() {
                    Role::Fiber(i) => *i,
                    _ => {
                        return Err(ExprError::Syntax {
                            pos: fpos,
                            message: format!("'{fname}' is not a fiber coordinate"),
                        })
                    }
                };
                self.expect_sym(',')?;
                let base = self.base_index()?;
                self.expect_sym(')')?;
                self.by_role(Role::Momentum { fiber, base }, "mom(..)".into(), pos)
            }
            "jet" if call => {
                self.pos += 1;
                let target = self.coord_ref()?;
                self.expect_sym(',')?;
                let base = self.base_index()?;
                self.expect_sym(')')?;
                self.by_role(
                    Role::jet(target.role(), base),
                    format!("jet({target},..)"),
                    pos,
                )
            }
            _ => self.named(&name, pos),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed(Vec<CoordId>);

    impl CoordLookup for Fixed {
        fn by_name(&self, name: &str) -> Option<CoordId> {
            self.0.iter().find(|c| c.name() == name).cloned()
        }
        fn by_role(&self, role: &Role) -> Option<CoordId> {
            self.0.iter().find(|c| c.role() == role).cloned()
        }
    }

    fn oscillator() -> Fixed {
        let y = Role::Fiber(0);
        let p = Role::Momentum { fiber: 0, base: 0 };
        Fixed(vec![
            CoordId::new("x", Role::Base(0)),
            CoordId::new("y", y.clone()),
            CoordId::new("p_y", p.clone()),
            CoordId::new("jet(y,x)", Role::jet(&y, 0)),
            CoordId::new("jet(p_y,x)", Role::jet(&p, 0)),
        ])
    }

    #[test]
    fn parses_and_resolves_reserved_tokens() {
        let ch = oscillator();
        let a = parse_scalar("(mom(y,x)^2 + y^2)/2", &ch).unwrap();
        let b = parse_scalar("p_y^2/2 + 1/2*y^2", &ch).unwrap();
        assert_eq!(a, b);
        let j = parse_scalar("jet(mom(y,x),x) - jet(p_y,x)", &ch).unwrap();
        assert!(j.is_zero());
        assert!(parse_scalar("y - y", &ch).unwrap().is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        let ch = oscillator();
        assert_eq!(
            parse_scalar("1/(x - x)", &ch),
            Err(ExprError::ZeroDenominator)
        );
        assert_eq!(
            parse_scalar("y + z", &ch),
            Err(ExprError::UnknownIdentifier {
                name: "z".into(),
                pos: 4
            })
        );
        assert!(matches!(
            parse_scalar("y +", &ch),
            Err(ExprError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_scalar("y ^ x", &ch),
            Err(ExprError::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_scalar("y $ 1", &ch),
            Err(ExprError::Syntax { pos: 2, .. })
        ));
    }

    #[test]
    fn macros_and_kernels() {
        let ch = oscillator();
        let scope = Scope::new(&ch).with_macro("rho", parse_scalar("1 + x^2", &ch).unwrap());
        let e = parse_in_scope("rho*sin(y)", &scope).unwrap();
        assert_eq!(e.to_string(), "x^2*sin(y) + sin(y)");
        assert!(parse_scalar("sin(y)^2 + cos(y)^2 - 1", &ch).unwrap() != Scalar::zero());
    }
}
