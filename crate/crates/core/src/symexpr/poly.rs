//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are chart coordinates or opaque kernel applications such as
//! `sin(x*y)`. Terms are kept in a graded-lexicographic monomial order, so two
//! polynomials are equal exactly when their term maps are equal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coord::CoordId;
use super::scalar::Scalar;

/// Registered transcendental functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            _ => None,
        }
    }
}

/// An application `func(arg)`, treated as an independent variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Kernel {
    pub func: Func,
    pub arg: Arc<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Coord(CoordId),
    Kernel(Kernel),
}

impl Var {
    pub(crate) fn depends_on(&self, c: &CoordId) -> bool {
        match self {
            Var::Coord(v) => v == c,
            Var::Kernel(k) => k.arg.depends_on(c),
        }
    }

    pub(crate) fn collect_coords(&self, out: &mut BTreeSet<CoordId>) {
        match self {
            Var::Coord(v) => {
                out.insert(v.clone());
            }
            Var::Kernel(k) => k.arg.collect_coords(out),
        }
    }
}

/// Power product; entries sorted by variable, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Remove `v`, returning its exponent and the rest.
    fn split_off(&self, v: &Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, f)| {
                if w == v {
                    e = *f;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }

    fn lower(&self, v: &Var) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(w, e)| {
                    if w == v {
                        (*e > 1).then(|| (w.clone(), e - 1))
                    } else {
                        Some((w.clone(), *e))
                    }
                })
                .collect(),
        )
    }
}

impl Ord for Monomial {
    /// Graded, then lexicographic with earlier variables weighing more.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Poly::term(BigRational::one(), Monomial::var(v, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the leading monomial down.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, k: &BigRational) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(k) = self.constant_value() {
            return other.scale(&k);
        }
        if let Some(k) = other.constant_value() {
            return self.scale(&k);
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scale so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn leading_is_negative(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// View as a univariate polynomial in `v`.
    fn coeffs_in(&self, v: &Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    fn leading_coeff_in(&self, v: &Var) -> (u32, Poly) {
        let mut cs = self.coeffs_in(v);
        cs.pop_last().unwrap_or((0, Poly::zero()))
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        if let Some(k) = divisor.constant_value() {
            return Some(self.scale(&k.recip()));
        }
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&lm)?;
            let k = rc / &lc;
            rem = rem.sub(&divisor.mul_term(&m, &k));
            quot.add_term(m, k);
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`.
    fn prem(&self, b: &Poly, v: &Var) -> Poly {
        let (db, lb) = b.leading_coeff_in(v);
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let (dr, lr) = r.leading_coeff_in(v);
            if dr < db {
                return r;
            }
            let shift = Poly::term(BigRational::one(), Monomial::var(v.clone(), dr - db));
            r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
        }
    }

    /// Content with respect to `v` and the corresponding primitive part.
    fn content_primitive(&self, v: &Var) -> (Poly, Poly) {
        let coeffs = self.coeffs_in(v);
        let mut content = Poly::zero();
        for c in coeffs.values() {
            content = prs_gcd(&content, c);
            if content.is_one() {
                break;
            }
        }
        let prim = self
            .div_exact(&content)
            .expect("content divides its polynomial");
        (content, prim)
    }

    pub fn diff_coord(&self, c: &CoordId) -> Scalar {
        let mut out = Scalar::zero();
        let mut poly_part = Poly::zero();
        for (m, k) in &self.terms {
            for (v, e) in &m.0 {
                if !v.depends_on(c) {
                    continue;
                }
                let k = k * BigRational::from_integer((*e).into());
                let lowered = m.lower(v);
                match v {
                    Var::Coord(_) => poly_part.add_term(lowered, k),
                    Var::Kernel(kern) => {
                        let inner = kern.arg.diff(c);
                        let outer = Scalar::kernel_derivative(kern);
                        let factor = Scalar::from_poly(Poly::term(k, lowered));
                        out = out + factor * outer * inner;
                    }
                }
            }
        }
        out + Scalar::from_poly(poly_part)
    }

    pub fn evaluate<F>(&self, mut value_of: F) -> Scalar
    where
        F: FnMut(&Var) -> Scalar,
    {
        let mut cache: BTreeMap<Var, Scalar> = BTreeMap::new();
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::from_rational(c.clone());
            for (v, e) in &m.0 {
                let val = cache
                    .entry(v.clone())
                    .or_insert_with(|| value_of(v))
                    .clone();
                t = t * val.pow(*e);
            }
            out = out + t;
        }
        out
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let vars: Vec<Var> = a.vars().union(&b.vars()).cloned().collect();
    if let Some(h) = heuristic::gcd(&a.integral(), &b.integral(), &vars) {
        return h.monic();
    }
    prs_gcd(a, b)
}

/// Gcd through primitive pseudo-remainder sequences; slow but always
/// succeeds.
fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let vars: BTreeSet<Var> = a.vars().union(&b.vars()).cloned().collect();
    let v = vars.into_iter().next().expect("non-constant");
    let (ca, pa) = a.content_primitive(&v);
    let (cb, pb) = b.content_primitive(&v);
    let c = prs_gcd(&ca, &cb);
    if pa.degree_in(&v) == 0 || pb.degree_in(&v) == 0 {
        return c.monic();
    }
    let (mut r0, mut r1) = if pa.degree_in(&v) >= pb.degree_in(&v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = r0.prem(&r1, &v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&v) == 0 {
            return c.monic();
        }
        r0 = r1;
        r1 = r.content_primitive(&v).1.monic();
    }
    c.mul(&r1.content_primitive(&v).1).monic()
}

impl Poly {
    /// Integer multiple with coprime integer coefficients.
    fn integral(&self) -> Poly {
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = self.scale(&BigRational::from_integer(lcm));
        let content = scaled.int_content();
        scaled.scale(&BigRational::from_integer(content).recip())
    }

    /// Gcd of the (integer) coefficients.
    fn int_content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    fn max_norm(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs())
            .max()
            .unwrap_or_default()
    }

    /// Substitute the integer `x` for `v`.
    fn eval_at(&self, v: &Var, x: &BigInt) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.add_term(
                rest,
                c * BigRational::from_integer(num_traits::pow(x.clone(), e as usize)),
            );
        }
        out
    }

    fn map_coeffs(&self, f: impl Fn(&BigInt) -> BigInt) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), BigRational::from_integer(f(c.numer())));
        }
        out
    }
}

/// Heuristic gcd of integer polynomials (Char, Geddes and Gonnet): evaluate
/// one variable at a large integer, recurse, and read the gcd back off the
/// digits of the result. A candidate is only returned after it divides both
/// inputs.
mod heuristic {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use super::{Monomial, Poly, Var};

    const ATTEMPTS: usize = 6;

    fn symmetric_mod(c: &BigInt, x: &BigInt) -> BigInt {
        let r = c.mod_floor(x);
        if &r * 2 > *x {
            r - x
        } else {
            r
        }
    }

    /// The polynomial in `v` whose value at `x` is `h`, with coefficients
    /// in the symmetric range.
    fn interpolate(h: &Poly, v: &Var, x: &BigInt) -> Poly {
        let mut out = Poly::zero();
        let mut h = h.clone();
        let mut i = 0;
        let inv = BigRational::from_integer(x.clone()).recip();
        while !h.is_zero() {
            let g = h.map_coeffs(|c| symmetric_mod(c, x));
            out = out.add(&g.mul_term(&Monomial::var(v.clone(), i), &BigRational::one()));
            h = h.sub(&g).scale(&inv);
            i += 1;
        }
        if out.leading_is_negative() {
            out.neg()
        } else {
            out
        }
    }

    fn primitive(p: &Poly) -> Poly {
        let c = p.int_content();
        if c.is_zero() {
            return p.clone();
        }
        p.scale(&BigRational::from_integer(c).recip())
    }

    fn divides(h: &Poly, f: &Poly) -> bool {
        !h.is_zero() && f.div_exact(h).is_some()
    }

    /// Gcd of `f` and `g`, integer polynomials in `vars`, up to sign.
    pub(super) fn gcd(f: &Poly, g: &Poly, vars: &[Var]) -> Option<Poly> {
        if f.is_zero() {
            return Some(g.clone());
        }
        if g.is_zero() {
            return Some(f.clone());
        }
        let Some((v, rest)) = vars.split_last() else {
            let k = f.int_content().gcd(&g.int_content());
            return Some(Poly::constant(BigRational::from_integer(k)));
        };
        if f.degree_in(v) == 0 && g.degree_in(v) == 0 {
            return gcd(f, g, rest);
        }
        let content = f.int_content().gcd(&g.int_content());
        let (f, g) = (primitive(f), primitive(g));
        // Evaluation points below this bound could accept a proper divisor
        // of the gcd.
        let mut x: BigInt = f.max_norm().min(g.max_norm()) * 2 + 29;
        for _ in 0..ATTEMPTS {
            let (ff, gg) = (f.eval_at(v, &x), g.eval_at(v, &x));
            if !ff.is_zero() && !gg.is_zero() {
                if let Some(he) = gcd(&ff, &gg, rest) {
                    let k = BigRational::from_integer(content.clone());
                    let h = primitive(&interpolate(&he, v, &x));
                    if divides(&h, &f) && divides(&h, &g) {
                        return Some(h.scale(&k));
                    }
                    for (e, p, q) in [(&ff, &f, &g), (&gg, &g, &f)] {
                        let Some(cofactor) = e.div_exact(&he) else {
                            continue;
                        };
                        let cofactor = interpolate(&cofactor, v, &x);
                        if let Some(h) = p.div_exact(&cofactor) {
                            let h = primitive(&h);
                            if divides(&h, q) && divides(&h, p) {
                                return Some(h.scale(&k));
                            }
                        }
                    }
                }
            }
            x = &x * 73794 * x.sqrt().sqrt() / 27011;
        }
        None
    }
}
