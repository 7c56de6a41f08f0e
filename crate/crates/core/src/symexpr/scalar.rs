use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::coord::CoordId;
use super::poly::{gcd, Func, Kernel, Monomial, Poly, Var};
use super::ExprError;

/// Exact scalar expression: a reduced fraction of polynomials whose
/// denominator has leading coefficient one.
///
/// The representation is canonical, so structural equality decides equality
/// of rational expressions. Kernel applications are compared syntactically
/// after normalization of their arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

pub type Bindings = BTreeMap<CoordId, Scalar>;

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(k.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(k: BigRational) -> Self {
        Scalar::from_poly(Poly::constant(k))
    }

    pub fn from_bigint(k: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(k))
    }

    pub fn from_poly(num: Poly) -> Self {
        Scalar {
            num,
            den: Poly::one(),
        }
    }

    pub fn coord(c: &CoordId) -> Self {
        Scalar::from_poly(Poly::var(Var::Coord(c.clone())))
    }

    /// Normalize `num / den`.
    pub fn fraction(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        if let Some(k) = den.constant_value() {
            return Ok(Scalar::from_poly(num.scale(&k.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if lc.is_one() {
            Ok(Scalar { num, den })
        } else {
            let inv = lc.recip();
            Ok(Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            })
        }
    }

    /// `func(arg)`, folding the values at zero.
    pub fn apply(func: Func, arg: Scalar) -> Self {
        if arg.is_zero() {
            return match func {
                Func::Sin => Scalar::zero(),
                Func::Cos | Func::Exp => Scalar::one(),
            };
        }
        Scalar::from_poly(Poly::var(Var::Kernel(Kernel {
            func,
            arg: Arc::new(arg),
        })))
    }

    pub(crate) fn kernel_derivative(k: &Kernel) -> Scalar {
        let arg = (*k.arg).clone();
        match k.func {
            Func::Sin => Scalar::apply(Func::Cos, arg),
            Func::Cos => -Scalar::apply(Func::Sin, arg),
            Func::Exp => Scalar::apply(Func::Exp, arg),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn has_kernels(&self) -> bool {
        self.num
            .vars()
            .iter()
            .chain(self.den.vars().iter())
            .any(|v| matches!(v, Var::Kernel(_)))
    }

    pub fn depends_on(&self, c: &CoordId) -> bool {
        self.num
            .vars()
            .iter()
            .chain(self.den.vars().iter())
            .any(|v| v.depends_on(c))
    }

    pub(crate) fn collect_coords(&self, out: &mut BTreeSet<CoordId>) {
        for v in self.num.vars().iter().chain(self.den.vars().iter()) {
            v.collect_coords(out);
        }
    }

    /// Every coordinate the expression depends on, kernels included.
    pub fn coords(&self) -> BTreeSet<CoordId> {
        let mut out = BTreeSet::new();
        self.collect_coords(&mut out);
        out
    }

    pub fn pow(&self, e: u32) -> Scalar {
        Scalar {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ExprError> {
        if other.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        Scalar::fraction(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<Scalar, ExprError> {
        Scalar::one().checked_div(self)
    }

    /// Exact partial derivative.
    pub fn diff(&self, c: &CoordId) -> Scalar {
        if !self.depends_on(c) {
            return Scalar::zero();
        }
        let dn = self.num.diff_coord(c);
        if self.den.is_one() {
            return dn;
        }
        let n = Scalar::from_poly(self.num.clone());
        let d = Scalar::from_poly(self.den.clone());
        let dd = self.den.diff_coord(c);
        (dn * d.clone() - n * dd)
            .checked_div(&d.pow(2))
            .expect("denominator is nonzero")
    }

    /// Simultaneous substitution of coordinates.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Scalar, ExprError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut failure = None;
        let mut value_of = |v: &Var| match v {
            Var::Coord(c) => bindings.get(c).cloned().unwrap_or_else(|| Scalar::coord(c)),
            Var::Kernel(k) => match k.arg.substitute(bindings) {
                Ok(arg) => Scalar::apply(k.func, arg),
                Err(e) => {
                    failure = Some(e);
                    Scalar::zero()
                }
            },
        };
        let num = self.num.evaluate(&mut value_of);
        let den = self.den.evaluate(&mut value_of);
        if let Some(e) = failure {
            return Err(e);
        }
        num.checked_div(&den)
    }

    /// Substitute a single coordinate.
    pub fn subs1(&self, c: &CoordId, value: &Scalar) -> Result<Scalar, ExprError> {
        let mut b = Bindings::new();
        b.insert(c.clone(), value.clone());
        self.substitute(&b)
    }

    /// Render without rewriting; same as `Display`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// True when the rendering is a single signed factor product, so it can
    /// sit next to a basis element without parentheses.
    pub fn is_single_term(&self) -> bool {
        self.den.is_one() && self.num.len() <= 1
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(k: i64) -> Self {
        Scalar::from_int(k)
    }
}

impl From<&CoordId> for Scalar {
    fn from(c: &CoordId) -> Self {
        Scalar::coord(c)
    }
}

fn add_impl(a: &Scalar, b: &Scalar) -> Scalar {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        if a.den.is_one() {
            return Scalar::from_poly(a.num.add(&b.num));
        }
        return Scalar::fraction(a.num.add(&b.num), a.den.clone()).expect("nonzero denominator");
    }
    Scalar::fraction(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
        .expect("nonzero denominator")
}

fn mul_impl(a: &Scalar, b: &Scalar) -> Scalar {
    if a.is_zero() || b.is_zero() {
        return Scalar::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return Scalar::from_poly(a.num.mul(&b.num));
    }
    Scalar::fraction(a.num.mul(&b.num), a.den.mul(&b.den)).expect("nonzero denominator")
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $body(&self, rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(self, &rhs)
            }
        }
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $body(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Sub, sub, |a: &Scalar, b: &Scalar| add_impl(a, &-b));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

fn write_factors(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    for (i, (v, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        match v {
            Var::Coord(c) => write!(f, "{c}")?,
            Var::Kernel(k) => write!(f, "{}({})", k.func.name(), k.arg)?,
        }
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (i, (m, c)) in p.terms_desc().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else if c.is_negative() {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        if m.is_one() {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write_factors(f, m)?;
        }
    }
    Ok(())
}

fn is_bare_factor(p: &Poly) -> bool {
    p.len() == 1
        && p.leading()
            .is_some_and(|(m, c)| c.is_one() && m.factors().len() == 1)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write_poly(f, &self.num);
        }
        if self.num.len() > 1 {
            f.write_str("(")?;
            write_poly(f, &self.num)?;
            f.write_str(")")?;
        } else {
            write_poly(f, &self.num)?;
        }
        f.write_str("/")?;
        if is_bare_factor(&self.den) {
            write_poly(f, &self.den)
        } else {
            f.write_str("(")?;
            write_poly(f, &self.den)?;
            f.write_str(")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::coord::Role;

    fn coords() -> (CoordId, CoordId, CoordId) {
        (
            CoordId::new("x", Role::Base(0)),
            CoordId::new("y", Role::Fiber(0)),
            CoordId::new("p_y", Role::Momentum { fiber: 0, base: 0 }),
        )
    }

    #[test]
    fn power_rule_and_quotient_rule() {
        let (_, y, p) = coords();
        let sy = Scalar::coord(&y);
        let sp = Scalar::coord(&p);
        let e = sy.pow(2) * &sp;
        assert_eq!(e.diff(&y), Scalar::from_int(2) * &sy * &sp);
        let q = Scalar::one().checked_div(&(Scalar::one() + &sy)).unwrap();
        let expected = -(Scalar::one()
            .checked_div(&(Scalar::one() + &sy).pow(2))
            .unwrap());
        assert_eq!(q.diff(&y), expected);
    }

    #[test]
    fn kernel_derivative() {
        let (x, y, _) = coords();
        let s = Scalar::apply(Func::Sin, Scalar::coord(&y));
        assert_eq!(s.diff(&y), Scalar::apply(Func::Cos, Scalar::coord(&y)));
        assert!(s.diff(&x).is_zero());
        let e = Scalar::apply(Func::Exp, Scalar::coord(&x) * Scalar::coord(&y));
        assert_eq!(e.diff(&x), Scalar::coord(&y) * &e);
    }

    #[test]
    fn cancellation_and_zero_denominator() {
        let (x, y, _) = coords();
        let sx = Scalar::coord(&x);
        let sy = Scalar::coord(&y);
        assert!((&sy - &sy).is_zero());
        assert_eq!(
            Scalar::one().checked_div(&(&sx - &sx)),
            Err(ExprError::ZeroDenominator)
        );
        let r = (sx.pow(2) - sy.pow(2)).checked_div(&(&sx - &sy)).unwrap();
        assert_eq!(r, &sx + &sy);
    }

    #[test]
    fn substitution() {
        let (x, y, p) = coords();
        let sp = Scalar::coord(&p);
        assert_eq!(
            sp.pow(2).subs1(&p, &Scalar::coord(&y)).unwrap(),
            Scalar::coord(&y).pow(2)
        );
        let inv = sp.recip().unwrap();
        assert_eq!(
            inv.subs1(&p, &Scalar::zero()),
            Err(ExprError::ZeroDenominator)
        );
        let s = Scalar::coord(&x) + Scalar::coord(&y);
        assert_eq!(s.substitute(&Bindings::new()).unwrap(), s);
    }

    #[test]
    fn rendering() {
        let (x, y, p) = coords();
        let h = (Scalar::coord(&p).pow(2) + Scalar::coord(&y).pow(2)) * Scalar::ratio(1, 2);
        assert_eq!(h.to_string(), "1/2*y^2 + 1/2*p_y^2");
        let r = Scalar::coord(&y)
            .checked_div(&(Scalar::one() + Scalar::coord(&x).pow(2)))
            .unwrap();
        assert_eq!(r.to_string(), "y/(x^2 + 1)");
        assert_eq!((-Scalar::coord(&y)).to_string(), "-y");
    }
}
