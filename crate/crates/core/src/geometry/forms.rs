//! Exterior forms, multivector fields and tangent-valued forms in coordinates.
//!
//! Both forms and multivectors are stored as maps from strictly increasing
//! coordinate tuples (chart order) to nonzero coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::symexpr::{Bindings, CoordId, ExprError, Scalar};

use super::GeometryError;

type Tuple = Vec<CoordId>;

/// Sort a tuple into chart order, returning the permutation sign, or `None`
/// when a coordinate repeats.
pub(crate) fn canonical_tuple(mut t: Tuple) -> Option<(Tuple, i64)> {
    let mut sign = 1;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((t, sign))
    }
}

fn signed(s: Scalar, sign: i64) -> Scalar {
    if sign < 0 {
        -s
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Alternating {
    degree: usize,
    terms: BTreeMap<Tuple, Scalar>,
}

impl Alternating {
    fn zero(degree: usize) -> Self {
        Alternating {
            degree,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, tuple: Tuple, coeff: Scalar) {
        debug_assert_eq!(tuple.len(), self.degree);
        if coeff.is_zero() {
            return;
        }
        let Some((tuple, sign)) = canonical_tuple(tuple) else {
            return;
        };
        let coeff = signed(coeff, sign);
        match self.terms.remove(&tuple) {
            Some(old) => {
                let s = old + coeff;
                if !s.is_zero() {
                    self.terms.insert(tuple, s);
                }
            }
            None => {
                self.terms.insert(tuple, coeff);
            }
        }
    }

    fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree, other.degree,
            "adding tensors of different degree"
        );
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    fn scale(&self, k: &Scalar) -> Self {
        let mut out = Alternating::zero(self.degree);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * k);
        }
        out
    }

    fn wedge(&self, other: &Self) -> Self {
        let mut out = Alternating::zero(self.degree + other.degree);
        for (t, c) in &self.terms {
            for (u, d) in &other.terms {
                let mut tu = t.clone();
                tu.extend(u.iter().cloned());
                out.add_term(tu, c * d);
            }
        }
        out
    }

    fn try_map(&self, f: impl Fn(&Scalar) -> Result<Scalar, ExprError>) -> Result<Self, ExprError> {
        let mut out = Alternating::zero(self.degree);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), f(c)?);
        }
        Ok(out)
    }
}

fn write_terms(
    f: &mut fmt::Formatter<'_>,
    a: &Alternating,
    basis: impl Fn(&Tuple) -> String,
) -> fmt::Result {
    if a.terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (t, c)) in a.terms.iter().enumerate() {
        let b = basis(t);
        let cs = c.to_string();
        let (neg, body) = if c.is_single_term() && cs.starts_with('-') {
            (true, cs[1..].to_string())
        } else {
            (false, cs)
        };
        if i > 0 {
            f.write_str(if neg { " - " } else { " + " })?;
        } else if neg {
            f.write_str("-")?;
        }
        if t.is_empty() {
            write!(f, "{body}")?;
        } else if body == "1" {
            f.write_str(&b)?;
        } else if c.is_single_term() {
            write!(f, "{body} {b}")?;
        } else {
            write!(f, "({body}) {b}")?;
        }
    }
    Ok(())
}

/// Differential form of fixed degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffForm(Alternating);

impl DiffForm {
    pub fn zero(degree: usize) -> Self {
        DiffForm(Alternating::zero(degree))
    }

    pub fn function(s: Scalar) -> Self {
        let mut a = Alternating::zero(0);
        a.add_term(Vec::new(), s);
        DiffForm(a)
    }

    /// `dc`
    pub fn differential_of(c: &CoordId) -> Self {
        Self::term(Scalar::one(), vec![c.clone()])
    }

    /// `coeff · dc1 ∧ … ∧ dck`; the tuple need not be sorted.
    pub fn term(coeff: Scalar, tuple: Vec<CoordId>) -> Self {
        let mut a = Alternating::zero(tuple.len());
        a.add_term(tuple, coeff);
        DiffForm(a)
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<CoordId>, &Scalar)> {
        self.0.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.0.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.terms.is_empty()
    }

    /// Coefficient of the basis element given by `tuple` (any order).
    pub fn coefficient(&self, tuple: &[CoordId]) -> Scalar {
        match canonical_tuple(tuple.to_vec()) {
            Some((t, sign)) => signed(self.0.terms.get(&t).cloned().unwrap_or_default(), sign),
            None => Scalar::zero(),
        }
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        DiffForm(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        DiffForm(self.0.add(&other.0.scale(&Scalar::from_int(-1))))
    }

    pub fn scale(&self, k: &Scalar) -> DiffForm {
        DiffForm(self.0.scale(k))
    }

    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        DiffForm(self.0.wedge(&other.0))
    }

    /// Exterior derivative. Parameter symbols count as constants.
    pub fn d(&self) -> DiffForm {
        let mut out = Alternating::zero(self.degree() + 1);
        for (t, c) in &self.0.terms {
            for v in c.coords() {
                if v.is_param() {
                    continue;
                }
                let mut tu = vec![v.clone()];
                tu.extend(t.iter().cloned());
                out.add_term(tu, c.diff(&v));
            }
        }
        DiffForm(out)
    }

    /// Pull back along the coordinate map `c ↦ map[c]`; unmapped coordinates
    /// are left alone.
    pub fn pullback(&self, map: &Bindings) -> Result<DiffForm, ExprError> {
        let mut images: BTreeMap<CoordId, DiffForm> = BTreeMap::new();
        let mut out = DiffForm::zero(self.degree());
        for (t, c) in &self.0.terms {
            let mut acc = DiffForm::function(c.substitute(map)?);
            for v in t {
                let dv = images
                    .entry(v.clone())
                    .or_insert_with(|| match map.get(v) {
                        Some(img) => DiffForm::function(img.clone()).d(),
                        None => DiffForm::differential_of(v),
                    })
                    .clone();
                acc = acc.wedge(&dv);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    pub fn substitute(&self, map: &Bindings) -> Result<DiffForm, ExprError> {
        Ok(DiffForm(self.0.try_map(|c| c.substitute(map))?))
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.0, |t| {
            t.iter()
                .map(|c| format!("d{c}"))
                .collect::<Vec<_>>()
                .join("^")
        })
    }
}

/// Multivector field of fixed degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiVector(Alternating);

impl MultiVector {
    pub fn zero(degree: usize) -> Self {
        MultiVector(Alternating::zero(degree))
    }

    pub fn function(s: Scalar) -> Self {
        let mut a = Alternating::zero(0);
        a.add_term(Vec::new(), s);
        MultiVector(a)
    }

    /// `∂_c`
    pub fn partial(c: &CoordId) -> Self {
        Self::term(Scalar::one(), vec![c.clone()])
    }

    pub fn term(coeff: Scalar, tuple: Vec<CoordId>) -> Self {
        let mut a = Alternating::zero(tuple.len());
        a.add_term(tuple, coeff);
        MultiVector(a)
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<CoordId>, &Scalar)> {
        self.0.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.0.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.terms.is_empty()
    }

    pub fn coefficient(&self, tuple: &[CoordId]) -> Scalar {
        match canonical_tuple(tuple.to_vec()) {
            Some((t, sign)) => signed(self.0.terms.get(&t).cloned().unwrap_or_default(), sign),
            None => Scalar::zero(),
        }
    }

    pub fn add(&self, other: &MultiVector) -> MultiVector {
        MultiVector(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &MultiVector) -> MultiVector {
        MultiVector(self.0.add(&other.0.scale(&Scalar::from_int(-1))))
    }

    pub fn scale(&self, k: &Scalar) -> MultiVector {
        MultiVector(self.0.scale(k))
    }

    pub fn wedge(&self, other: &MultiVector) -> MultiVector {
        MultiVector(self.0.wedge(&other.0))
    }

    pub fn substitute(&self, map: &Bindings) -> Result<MultiVector, ExprError> {
        Ok(MultiVector(self.0.try_map(|c| c.substitute(map))?))
    }

    /// Apply a vector field to a function.
    pub fn apply(&self, f: &Scalar) -> Result<Scalar, GeometryError> {
        if self.degree() != 1 {
            return Err(GeometryError::DegreeMismatch {
                expected: 1,
                found: self.degree(),
            });
        }
        Ok(self.terms().map(|(t, c)| c * f.diff(&t[0])).sum())
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.0, |t| {
            t.iter()
                .map(|c| format!("D({c})"))
                .collect::<Vec<_>>()
                .join("^")
        })
    }
}

/// `ι_c` on a basis tuple: the sign and the remaining tuple.
fn interior_basis(c: &CoordId, t: &[CoordId]) -> Option<(i64, Tuple)> {
    let k = t.iter().position(|v| v == c)?;
    let mut rest = t.to_vec();
    rest.remove(k);
    Some((if k % 2 == 0 { 1 } else { -1 }, rest))
}

/// Interior product `v ⌟ a`. A decomposable `∂_1 ∧ … ∧ ∂_r` acts as
/// `ι_1 ∘ … ∘ ι_r`: the last-listed factor is applied first.
pub fn contract(v: &MultiVector, a: &DiffForm) -> Result<DiffForm, GeometryError> {
    if v.degree() > a.degree() {
        return Err(GeometryError::DegreeMismatch {
            expected: a.degree(),
            found: v.degree(),
        });
    }
    let mut out = Alternating::zero(a.degree() - v.degree());
    for (vt, vc) in v.terms() {
        'terms: for (at, ac) in a.terms() {
            let mut tuple = at.clone();
            let mut sign = 1;
            for c in vt.iter().rev() {
                match interior_basis(c, &tuple) {
                    Some((s, rest)) => {
                        sign *= s;
                        tuple = rest;
                    }
                    None => continue 'terms,
                }
            }
            out.add_term(tuple, signed(vc * ac, sign));
        }
    }
    Ok(DiffForm(out))
}

/// Right derivative of `θ_t` by `θ_c`: sign and remaining tuple.
fn right_derivative(c: &CoordId, t: &[CoordId]) -> Option<(i64, Tuple)> {
    let k = t.iter().position(|v| v == c)?;
    let moves = t.len() - 1 - k;
    let mut rest = t.to_vec();
    rest.remove(k);
    Some((if moves.is_multiple_of(2) { 1 } else { -1 }, rest))
}

/// One half of the bracket: `Σ_a (P ∂⃖/∂θ_a) ∧ ∂_a Q`.
fn half_bracket(p: &MultiVector, q: &MultiVector, out: &mut Alternating) {
    for (pt, pc) in p.terms() {
        for a in pt {
            let (sign, rest) = right_derivative(a, pt).expect("a occurs in pt");
            for (qt, qc) in q.terms() {
                let dq = qc.diff(a);
                if dq.is_zero() {
                    continue;
                }
                let mut tuple = rest.clone();
                tuple.extend(qt.iter().cloned());
                out.add_term(tuple, signed(pc * dq, sign));
            }
        }
    }
}

/// Schouten–Nijenhuis bracket, normalized so that on vector fields it is the
/// Lie bracket `[X, Y] = X(Y) − Y(X)`.
pub fn schouten_nijenhuis(p: &MultiVector, q: &MultiVector) -> MultiVector {
    let (dp, dq) = (p.degree(), q.degree());
    let degree = (dp + dq).saturating_sub(1);
    if dp + dq == 0 {
        return MultiVector::zero(0);
    }
    let mut first = Alternating::zero(degree);
    half_bracket(p, q, &mut first);
    let mut second = Alternating::zero(degree);
    half_bracket(q, p, &mut second);
    let sign = if (dp as i64 - 1) * (dq as i64 - 1) % 2 == 0 {
        -1
    } else {
        1
    };
    MultiVector(first.add(&second.scale(&Scalar::from_int(sign))))
}

/// A sum of `form ⊗ ∂_c` terms, kept in construction order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TangentValuedForm {
    terms: Vec<(DiffForm, CoordId)>,
}

impl TangentValuedForm {
    pub fn new(terms: Vec<(DiffForm, CoordId)>) -> Result<Self, GeometryError> {
        if let Some((first, _)) = terms.first() {
            if terms.iter().any(|(f, _)| f.degree() != first.degree()) {
                return Err(GeometryError::DegreeMismatch {
                    expected: first.degree(),
                    found: terms.iter().map(|(f, _)| f.degree()).max().unwrap_or(0),
                });
            }
        }
        Ok(TangentValuedForm { terms })
    }

    pub fn terms(&self) -> &[(DiffForm, CoordId)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Form parts summed per tangent direction, zero parts dropped.
    pub fn grouped(&self) -> BTreeMap<CoordId, DiffForm> {
        let mut out: BTreeMap<CoordId, DiffForm> = BTreeMap::new();
        for (form, c) in &self.terms {
            let e = out
                .entry(c.clone())
                .or_insert_with(|| DiffForm::zero(form.degree()));
            *e = e.add(form);
        }
        out.retain(|_, f| !f.is_zero());
        out
    }

    /// Equality as tensors, independent of how terms were split.
    pub fn same_tensor(&self, other: &TangentValuedForm) -> bool {
        self.grouped() == other.grouped()
    }
}

impl fmt::Display for TangentValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (form, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({form}) ⊗ D({c})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Chart;

    fn tstar() -> (Chart, [CoordId; 4]) {
        let ch = Chart::fibred(&["x"], &["y"]).unwrap().homogeneous();
        let c = ch.coords();
        let arr = [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()];
        (ch, arr)
    }

    fn s(c: &CoordId) -> Scalar {
        Scalar::coord(c)
    }

    #[test]
    fn wedge_signs() {
        let (_, [x, y, _, p]) = tstar();
        let dx = DiffForm::differential_of(&x);
        let dy = DiffForm::differential_of(&y);
        assert_eq!(dy.wedge(&dx), dx.wedge(&dy).scale(&Scalar::from_int(-1)));
        assert!(dx.wedge(&dx).is_zero());
        let pdy = DiffForm::term(s(&p), vec![y.clone()]);
        assert_eq!(pdy.wedge(&dx), DiffForm::term(-s(&p), vec![x, y]));
    }

    #[test]
    fn exterior_derivative_examples() {
        let (_, [x, y, pp, p]) = tstar();
        let pdy = DiffForm::term(s(&p), vec![y.clone()]);
        assert_eq!(
            pdy.d(),
            DiffForm::term(Scalar::one(), vec![p.clone(), y.clone()])
        );
        let xi = DiffForm::term(s(&pp), vec![x.clone()]).add(&pdy);
        let omega = DiffForm::term(Scalar::one(), vec![pp, x.clone()])
            .add(&DiffForm::term(Scalar::one(), vec![p, y.clone()]));
        assert_eq!(xi.d(), omega);
        let a = DiffForm::term(s(&x) * s(&y), vec![x]);
        assert!(a.d().d().is_zero());
    }

    #[test]
    fn contraction_examples() {
        let (_, [x, y, _, p]) = tstar();
        let dxdy = DiffForm::term(Scalar::one(), vec![x.clone(), y.clone()]);
        assert_eq!(
            contract(&MultiVector::partial(&x), &dxdy).unwrap(),
            DiffForm::differential_of(&y)
        );
        // (∂_y ∧ ∂_p) ⌟ (dp ∧ dy): ι_p first gives dy, then ι_y gives 1.
        let v = MultiVector::term(Scalar::one(), vec![y.clone(), p.clone()]);
        let a = DiffForm::term(Scalar::one(), vec![p, y]);
        assert_eq!(contract(&v, &a).unwrap(), DiffForm::function(Scalar::one()));
        assert!(contract(&v, &DiffForm::differential_of(&x)).is_err());
    }

    #[test]
    fn schouten_examples() {
        let (_, [x, y, _, _]) = tstar();
        let dx = MultiVector::partial(&x);
        let dy = MultiVector::partial(&y);
        assert!(schouten_nijenhuis(&dx, &dy).is_zero());
        let ydx = MultiVector::term(s(&y), vec![x.clone()]);
        assert_eq!(schouten_nijenhuis(&dy, &ydx), dx);
        let ydy = MultiVector::term(s(&y), vec![y.clone()]);
        assert_eq!(schouten_nijenhuis(&ydy, &ydx), ydx);
    }

    #[test]
    fn rendering() {
        let (_, [x, y, pp, p]) = tstar();
        let f = DiffForm::term(s(&pp) + s(&y), vec![x.clone()])
            .add(&DiffForm::term(-s(&p), vec![y.clone()]));
        assert_eq!(f.to_string(), "(y + pp) dx - p_y dy");
        assert_eq!(
            MultiVector::term(Scalar::from_int(-1), vec![x, p]).to_string(),
            "-D(x)^D(p_y)"
        );
    }
}
