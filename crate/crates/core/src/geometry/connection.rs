use std::collections::BTreeMap;
use std::fmt;

use crate::symexpr::{Bindings, CoordId, Scalar};

use super::forms::{MultiVector, TangentValuedForm};
use super::{Chart, DiffForm, GeometryError};

/// Connection `dx^μ ⊗ (∂_μ + γ^a_μ ∂_a)` on a fibred chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    chart: Chart,
    coeffs: BTreeMap<(CoordId, usize), Scalar>,
}

impl Connection {
    /// Keys are `(vertical coordinate a, base index μ)`; absent keys are zero.
    pub fn new(
        chart: &Chart,
        coeffs: BTreeMap<(CoordId, usize), Scalar>,
    ) -> Result<Connection, GeometryError> {
        if chart.kind().is_jet() {
            return Err(GeometryError::UnsupportedKind(chart.kind()));
        }
        let mut kept = BTreeMap::new();
        for ((a, mu), g) in coeffs {
            if !chart.contains(&a) || a.is_base() || mu >= chart.base_dim() {
                return Err(GeometryError::ForeignCoordinate(a.name().to_string()));
            }
            if let Some(j) = g.coords().into_iter().find(|c| c.is_jet()) {
                return Err(GeometryError::JetDependence(j.name().to_string()));
            }
            if !g.is_zero() {
                kept.insert((a, mu), g);
            }
        }
        Ok(Connection {
            chart: chart.clone(),
            coeffs: kept,
        })
    }

    pub fn zero(chart: &Chart) -> Connection {
        Connection {
            chart: chart.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn coefficient(&self, a: &CoordId, mu: usize) -> Scalar {
        self.coeffs
            .get(&(a.clone(), mu))
            .cloned()
            .unwrap_or_default()
    }

    pub fn coefficients(&self) -> &BTreeMap<(CoordId, usize), Scalar> {
        &self.coeffs
    }

    /// `∂_μ + γ^a_μ ∂_a`
    pub fn horizontal_lift(&self, mu: usize) -> MultiVector {
        let mut v = MultiVector::partial(&self.chart.base(mu));
        for a in self.chart.vertical_coords() {
            let g = self.coefficient(&a, mu);
            if !g.is_zero() {
                v = v.add(&MultiVector::term(g, vec![a]));
            }
        }
        v
    }

    pub fn to_tangent_valued(&self) -> TangentValuedForm {
        let mut terms = Vec::new();
        for (mu, x) in self.chart.base_coords().iter().enumerate() {
            terms.push((DiffForm::differential_of(x), x.clone()));
            for a in self.chart.vertical_coords() {
                let g = self.coefficient(&a, mu);
                if !g.is_zero() {
                    terms.push((DiffForm::term(g, vec![x.clone()]), a));
                }
            }
        }
        TangentValuedForm::new(terms).expect("all parts are one-forms")
    }

    /// Components `q^a_μ − γ^a_μ` of the covariant differential on `J¹Q`,
    /// keyed by the jet coordinate.
    pub fn covariant_differential(&self) -> Result<Vec<(CoordId, Scalar)>, GeometryError> {
        let jet = self.chart.jet()?;
        let mut out = Vec::new();
        for a in self.chart.vertical_coords() {
            for mu in 0..self.chart.base_dim() {
                let j = jet.jet_of(&a, mu).expect("jet chart has every jet");
                out.push((j.clone(), Scalar::coord(&j) - self.coefficient(&a, mu)));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// The first-order dynamic equation `q^a_μ = γ^a_μ` as substitution rules.
    pub fn dynamic_shell(&self) -> Result<Bindings, GeometryError> {
        let jet = self.chart.jet()?;
        let mut out = Bindings::new();
        for a in self.chart.vertical_coords() {
            for mu in 0..self.chart.base_dim() {
                let j = jet.jet_of(&a, mu).expect("jet chart has every jet");
                out.insert(j, self.coefficient(&a, mu));
            }
        }
        Ok(out)
    }

    /// `d_γ f = (∂_μ + γ^a_μ ∂_a) f dx^μ`
    pub fn evolution_operator(&self, f: &Scalar) -> Result<HorizontalOneForm, GeometryError> {
        if let Some(j) = f.coords().into_iter().find(|c| c.is_jet()) {
            return Err(GeometryError::JetDependence(j.name().to_string()));
        }
        let components = (0..self.chart.base_dim())
            .map(|mu| {
                self.horizontal_lift(mu)
                    .apply(f)
                    .expect("horizontal lifts are vector fields")
            })
            .collect();
        Ok(HorizontalOneForm::new(self.chart.base_coords(), components))
    }

    /// Wedge of the horizontal lifts over all base directions.
    pub fn to_nvector(&self) -> MultiVector {
        (0..self.chart.base_dim()).fold(MultiVector::function(Scalar::one()), |acc, mu| {
            acc.wedge(&self.horizontal_lift(mu))
        })
    }

    /// Connection of a locally decomposable transverse n-vector field; the
    /// pure-base component is scaled to one.
    pub fn from_nvector(chart: &Chart, w: &MultiVector) -> Result<Connection, GeometryError> {
        let n = chart.base_dim();
        if w.degree() != n {
            return Err(GeometryError::DegreeMismatch {
                expected: n,
                found: w.degree(),
            });
        }
        let base = chart.base_coords();
        let scale = w.coefficient(&base);
        if scale.is_zero() {
            return Err(GeometryError::NotTransverse);
        }
        let inv = scale.recip().expect("nonzero");
        let unit = w.scale(&inv);
        let mut coeffs = BTreeMap::new();
        for mu in 0..n {
            let mut tuple = base.clone();
            for a in chart.vertical_coords() {
                tuple[mu] = a.clone();
                let g = unit.coefficient(&tuple);
                if !g.is_zero() {
                    coeffs.insert((a, mu), g);
                }
            }
        }
        let conn = Connection::new(chart, coeffs)?;
        if conn.to_nvector() != unit {
            return Err(GeometryError::NotDecomposable);
        }
        Ok(conn)
    }
}

/// Pure-base component of an n-vector; the factor stripped by
/// [`Connection::from_nvector`].
pub fn transverse_component(chart: &Chart, w: &MultiVector) -> Scalar {
    w.coefficient(&chart.base_coords())
}

/// Horizontal differential `d_H f = (∂_μ + q^a_μ ∂_a) f dx^μ` on `J¹Q`.
pub fn horizontal_differential(
    chart: &Chart,
    f: &Scalar,
) -> Result<HorizontalOneForm, GeometryError> {
    let q = chart.underlying();
    let jet = q.jet()?;
    let components = (0..q.base_dim())
        .map(|mu| {
            let mut c = f.diff(&q.base(mu));
            for a in q.vertical_coords() {
                let da = f.diff(&a);
                if !da.is_zero() {
                    let j = jet.jet_of(&a, mu).expect("jet chart has every jet");
                    c = c + Scalar::coord(&j) * da;
                }
            }
            c
        })
        .collect();
    Ok(HorizontalOneForm::new(q.base_coords(), components))
}

/// `f_μ dx^μ`; the value of an evolution operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalOneForm {
    base: Vec<CoordId>,
    components: Vec<Scalar>,
}

impl HorizontalOneForm {
    pub fn new(base: Vec<CoordId>, components: Vec<Scalar>) -> Self {
        assert_eq!(base.len(), components.len());
        HorizontalOneForm { base, components }
    }

    pub fn components(&self) -> &[Scalar] {
        &self.components
    }

    pub fn component(&self, mu: usize) -> &Scalar {
        &self.components[mu]
    }

    pub fn base(&self) -> &[CoordId] {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Scalar::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> HorizontalOneForm {
        HorizontalOneForm {
            base: self.base.clone(),
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn try_map<E>(
        &self,
        f: impl Fn(&Scalar) -> Result<Scalar, E>,
    ) -> Result<HorizontalOneForm, E> {
        Ok(HorizontalOneForm {
            base: self.base.clone(),
            components: self.components.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn to_form(&self) -> DiffForm {
        self.base
            .iter()
            .zip(&self.components)
            .fold(DiffForm::zero(1), |acc, (x, c)| {
                acc.add(&DiffForm::term(c.clone(), vec![x.clone()]))
            })
    }
}

impl fmt::Display for HorizontalOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_form().fmt(f)
    }
}
