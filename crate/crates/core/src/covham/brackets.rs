use crate::geometry::{BundleKind, Chart};
use crate::symexpr::{CoordId, Scalar};

use super::CovhamError;

fn pair_bracket(pairs: &[(CoordId, CoordId)], f: &Scalar, g: &Scalar) -> Scalar {
    pairs
        .iter()
        .map(|(p, q)| f.diff(p) * g.diff(q) - f.diff(q) * g.diff(p))
        .sum()
}

fn check(
    chart: &Chart,
    kind: BundleKind,
    label: &'static str,
    f: &Scalar,
    g: &Scalar,
) -> Result<(), CovhamError> {
    if chart.kind() != kind {
        return Err(CovhamError::WrongChart {
            expected: label,
            found: chart.kind(),
        });
    }
    for e in [f, g] {
        if let Some(c) = e.coords().into_iter().find(|c| !chart.contains(c)) {
            return Err(CovhamError::ForbiddenCoordinate(c.name().to_string()));
        }
    }
    Ok(())
}

fn fiber_pairs(chart: &Chart) -> Vec<(CoordId, CoordId)> {
    (0..chart.fiber_dim())
        .map(|i| {
            (
                chart.momentum(i, 0).expect("momentum chart"),
                chart.fiber(i),
            )
        })
        .collect()
}

/// `{f,g}_V = ∂^i f ∂_i g − ∂_i f ∂^i g` on `V*Y`.
pub fn vertical_bracket(chart: &Chart, f: &Scalar, g: &Scalar) -> Result<Scalar, CovhamError> {
    check(chart, BundleKind::VstarY, "VstarY", f, g)?;
    Ok(pair_bracket(&fiber_pairs(chart), f, g))
}

/// Poisson bracket of `Ω = dp ∧ dx + dp_i ∧ dy^i` on `T*Y`, normalized by
/// `ϑ_f ⌟ Ω = −df` and `{f,g} = ϑ_f(g)`.
pub fn canonical_bracket(chart: &Chart, f: &Scalar, g: &Scalar) -> Result<Scalar, CovhamError> {
    check(chart, BundleKind::TstarY, "TstarY", f, g)?;
    let mut pairs = vec![(
        chart.homog_momentum().expect("homogeneous chart"),
        chart.base(0),
    )];
    pairs.extend(fiber_pairs(chart));
    Ok(pair_bracket(&pairs, f, g))
}
