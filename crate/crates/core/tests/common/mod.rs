#![allow(dead_code)]

use covhamkit::geometry::{Chart, DiffForm, MultiVector};
use covhamkit::symexpr::{CoordId, Scalar};
use proptest::prelude::*;

pub fn monomial(coords: &[CoordId], exps: &[u32]) -> Scalar {
    coords.iter().zip(exps).fold(Scalar::one(), |acc, (c, e)| {
        &acc * &Scalar::coord(c).pow(*e)
    })
}

/// Integer polynomials in `coords` with at most `terms` terms, each exponent
/// at most `deg`.
pub fn poly(coords: Vec<CoordId>, terms: usize, deg: u32) -> impl Strategy<Value = Scalar> {
    let n = coords.len();
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..=deg, n)), 1..=terms).prop_map(
        move |ts| {
            ts.iter()
                .map(|(c, e)| &Scalar::from_int(*c) * &monomial(&coords, e))
                .sum()
        },
    )
}

/// `p / (1 + q^2)`, never a zero denominator.
pub fn rational(coords: Vec<CoordId>) -> impl Strategy<Value = Scalar> {
    (poly(coords.clone(), 3, 2), poly(coords, 2, 1)).prop_map(|(p, q)| {
        let den = Scalar::one() + q.pow(2);
        p.checked_div(&den).expect("nonzero denominator")
    })
}

pub fn subsets(coords: &[CoordId], r: usize) -> Vec<Vec<CoordId>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, c) in coords.iter().enumerate() {
        for mut rest in subsets(&coords[k + 1..], r - 1) {
            rest.insert(0, c.clone());
            out.push(rest);
        }
    }
    out
}

pub fn form(coords: Vec<CoordId>, degree: usize) -> impl Strategy<Value = DiffForm> {
    let tuples = subsets(&coords, degree);
    let k = tuples.len();
    prop::collection::vec((0..k, poly(coords, 2, 2)), 0..=3).prop_map(move |ts| {
        ts.into_iter().fold(DiffForm::zero(degree), |acc, (i, c)| {
            acc.add(&DiffForm::term(c, tuples[i].clone()))
        })
    })
}

pub fn multivector(coords: Vec<CoordId>, degree: usize) -> impl Strategy<Value = MultiVector> {
    let tuples = subsets(&coords, degree);
    let k = tuples.len();
    prop::collection::vec((0..k, poly(coords, 2, 2)), 0..=3).prop_map(move |ts| {
        ts.into_iter()
            .fold(MultiVector::zero(degree), |acc, (i, c)| {
                acc.add(&MultiVector::term(c, tuples[i].clone()))
            })
    })
}

/// `T*Y` over a line with one fiber coordinate: `x, y, pp, p_y`.
pub fn tstar() -> Chart {
    Chart::fibred(&["x"], &["y"]).unwrap().homogeneous()
}

/// `V*Y` over a line with one fiber coordinate: `x, y, p_y`.
pub fn vstar() -> Chart {
    Chart::fibred(&["x"], &["y"]).unwrap().legendre()
}

/// `Y` with a two-dimensional base and two fiber coordinates.
pub fn plane_y() -> Chart {
    Chart::fibred(&["x0", "x1"], &["y0", "y1"]).unwrap()
}

pub fn coords(chart: &Chart) -> Vec<CoordId> {
    chart.coords().to_vec()
}

pub fn sign(k: usize) -> Scalar {
    Scalar::from_int(if k.is_multiple_of(2) { 1 } else { -1 })
}
