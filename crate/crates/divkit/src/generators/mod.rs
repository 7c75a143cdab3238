//! Catalog of normalized convex generating functions.
//!
//! Every catalog entry satisfies `f(1) = 0` and `f''(x) >= 0` on `(0, inf)`,
//! and carries a closed-form second derivative. Difference generators compose
//! linearly (`f = c_a f_a - c_b f_b`) but are *evaluated* through factored
//! forms wherever one exists, so values and curvatures near `x = 1` do not
//! lose precision to cancellation; the linear composition is kept as a
//! cross-check (see the module tests).

mod base;
mod tables;

use crate::measures::{BaseId, MeasureError, MeasureId, WeightedId};
use thiserror::Error;


#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("generator argument must be > 0, got {0}")]
    NonPositiveX(f64),
}

/// A catalog generating function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    id: MeasureId,
}

/// Fetch the catalog entry for a measure id.
pub fn generator_for(id: MeasureId) -> Generator {
    Generator { id }
}

/// Generator of the chain-gap measure `L_k`, constructed as the difference
/// `m_j - m_i` over the six-member difference chain.
pub fn l_generator(k: u8) -> Result<Generator, MeasureError> {
    MeasureId::l(k).map(generator_for)
}

impl Generator {
    pub fn id(&self) -> MeasureId {
        self.id
    }

    pub fn name(&self) -> String {
        self.id.name()
    }

    /// Generator value at `x > 0`.
    pub fn f(&self, x: f64) -> f64 {
        match self.id {
            MeasureId::Base(b) => base::base_f(b, x),
            MeasureId::Kt(t) => base::kt_f(t, x),
            MeasureId::B(i) => base::b_f(i, x),
            MeasureId::ExpK => base::expk_f(x),
            MeasureId::Diff(a, b) => match tables::diff_f(a, b) {
                Some(fr) => fr.eval(x),
                // Logarithmic pairs have no product form; compose directly.
                None => compose(a, b, x),
            },
            MeasureId::L(k) => tables::l_f(k).eval(x),
            MeasureId::Lv(k) => tables::lv_f(k).eval(x),
        }
    }

    /// Closed-form second derivative; available for the whole catalog.
    pub fn f2_closed(&self, x: f64) -> Option<f64> {
        Some(match self.id {
            MeasureId::Base(b) => base::base_f2(b, x),
            MeasureId::Kt(t) => base::kt_f2(t, x),
            MeasureId::B(i) => base::b_f2(i, x),
            MeasureId::ExpK => base::expk_f2(x),
            MeasureId::Diff(a, b) => tables::diff_f2(a, b).eval(x),
            MeasureId::L(k) => tables::l_f2(k).eval(x),
            MeasureId::Lv(k) => tables::lv_f2(k).eval(x),
        })
    }

    /// Central finite difference of `f`, step `h = 1e-6 * max(1, x)`.
    pub fn f2_fd(&self, x: f64) -> f64 {
        let h = 1e-6 * x.max(1.0);
        (self.f(x + h) - 2.0 * self.f(x) + self.f(x - h)) / (h * h)
    }

    /// Whether `f` is evaluated as a weighted difference of base generators
    /// (the logarithmic pairs, which admit no product form). Composed values
    /// carry absolute rounding of the order of machine epsilon near `x = 1`.
    pub fn is_composed(&self) -> bool {
        matches!(self.id, MeasureId::Diff(a, b) if tables::diff_f(a, b).is_none())
    }

    /// Second derivative: the closed form when present, else the central
    /// finite difference.
    pub fn f2(&self, x: f64) -> Result<f64, GenError> {
        if x <= 0.0 || x.is_nan() {
            return Err(GenError::NonPositiveX(x));
        }
        Ok(self.f2_closed(x).unwrap_or_else(|| self.f2_fd(x)))
    }

    pub fn description(&self) -> String {
        match self.id {
            MeasureId::Base(BaseId::Delta) => "triangular discrimination".into(),
            MeasureId::Base(BaseId::Hellinger) => "Hellinger discrimination".into(),
            MeasureId::Base(BaseId::Psi) => "symmetric chi-square divergence".into(),
            MeasureId::Base(BaseId::K0) => "K0 divergence".into(),
            MeasureId::Base(BaseId::F) => "F divergence".into(),
            MeasureId::Base(BaseId::J) => "J-divergence (symmetrized Kullback-Leibler)".into(),
            MeasureId::Base(BaseId::I) => "Jensen-Shannon divergence".into(),
            MeasureId::Base(BaseId::T) => "arithmetic-geometric mean divergence".into(),
            MeasureId::Kt(t) => format!("power divergence K_{t}"),
            MeasureId::B(i) => format!("B_{i} divergence"),
            MeasureId::ExpK => "exponential divergence (closed form of sum K_t/t!)".into(),
            MeasureId::Diff(a, b) => format!(
                "difference {}*{} - {}*{}",
                a.chain_coeff(),
                a.name(),
                b.chain_coeff(),
                b.name()
            ),
            MeasureId::L(k) => format!("chain gap L_{k}"),
            MeasureId::Lv(k) => format!("unit-coefficient chain gap variant of L_{k}"),
        }
    }
}

/// Linear composition `c_a f_a(x) - c_b f_b(x)` of a difference generator.
/// Exact by definition but cancellation-limited near `x = 1`; the factored
/// tables are preferred for evaluation.
pub(crate) fn compose(a: BaseId, b: BaseId, x: f64) -> f64 {
    let (wa, wb) = (WeightedId::canonical(a), WeightedId::canonical(b));
    wa.coeff.as_f64() * base::base_f(a, x) - wb.coeff.as_f64() * base::base_f(b, x)
}
