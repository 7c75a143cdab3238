//! Measure evaluation: closed-form sums, the generic convex-generator
//! functional, the `K_t` family with its exponential closed form and partial
//! sums, coefficient-weighted differences, and the chain-gap measures.
//!
//! Closed forms work directly in `(p_i, q_i)`; the functional route works in
//! the likelihood ratio `x_i = p_i/q_i`. The two paths are independent
//! computations of the same quantity and are held together by the dual-path
//! tests. All sums are compensated.

use crate::distributions::Distribution;
use crate::generators::{generator_for, Generator};
use crate::measures::{BaseId, MeasureError, MeasureId, WeightedId};
use crate::sum::NeumaierSum;
use thiserror::Error;

/// Arguments of `exp` beyond this are reported as overflow instead of
/// silently returning infinity.
pub const EXP_OVERFLOW_ARG: f64 = 700.0;

#[derive(Debug, Error, PartialEq)]
pub enum DivError {
    #[error("dimension mismatch: p has {0} outcomes, q has {1}")]
    DimensionMismatch(usize, usize),
    #[error("exponent argument {arg} at outcome {index} exceeds {EXP_OVERFLOW_ARG}")]
    Overflow { index: usize, arg: f64 },
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// A computed measure value (nats where logarithmic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceValue {
    pub measure: MeasureId,
    pub value: f64,
    pub p_dim: usize,
}

fn check_dims(p: &Distribution, q: &Distribution) -> Result<(), DivError> {
    if p.dim() != q.dim() {
        return Err(DivError::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(())
}

fn wrap(measure: MeasureId, value: f64, p: &Distribution) -> DivergenceValue {
    DivergenceValue {
        measure,
        value,
        p_dim: p.dim(),
    }
}

/// Generic convex-generator functional `sum_i q_i f(p_i/q_i)`.
pub fn csiszar(
    gen: &Generator,
    p: &Distribution,
    q: &Distribution,
) -> Result<DivergenceValue, DivError> {
    check_dims(p, q)?;
    let mut s = NeumaierSum::new();
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        s.add(qi * gen.f(pi / qi));
    }
    Ok(wrap(gen.id(), s.value(), p))
}

/// Per-term closed form of a base measure in `(p, q)`.
fn base_term(id: BaseId, p: f64, q: f64) -> f64 {
    let d = p - q;
    match id {
        BaseId::Delta => d * d / (p + q),
        BaseId::Hellinger => {
            let s = p.sqrt() - q.sqrt();
            0.5 * s * s
        }
        BaseId::Psi => d * d * (p + q) / (p * q),
        BaseId::K0 => d * d / (p * q).sqrt(),
        BaseId::F => {
            // (p^2 - q^2) as (p-q)(p+q): the expanded form loses all
            // significance when p and q agree to near machine precision.
            let s = d * (p + q);
            let pq = p * q;
            0.5 * s * s / (pq * pq.sqrt())
        }
        // With u = (p-q)/(p+q): ln(p/q) = 2 atanh(u) and the J/I terms admit
        // atanh/ln1p forms that stay relatively accurate when p and q nearly
        // coincide (the plain logarithms round absolutely there). atanh is
        // itself ill-conditioned as u -> +-1, so extreme ratios keep the
        // plain forms, which are stable in that regime.
        BaseId::J => {
            let u = d / (p + q);
            if u.abs() <= 0.5 {
                2.0 * d * u.atanh()
            } else {
                d * (p / q).ln()
            }
        }
        BaseId::I => {
            let u = d / (p + q);
            if u.abs() <= 0.5 {
                0.25 * (p + q) * ((-u * u).ln_1p() + 2.0 * u * u.atanh())
            } else {
                0.5 * (p * (2.0 * p / (p + q)).ln() + q * (2.0 * q / (p + q)).ln())
            }
        }
        BaseId::T => {
            let w = d / (p.sqrt() + q.sqrt());
            let g = (p * q).sqrt();
            0.5 * (p + q) * (w * w / (2.0 * g)).ln_1p()
        }
    }
}

fn kt_term(t: u32, p: f64, q: f64) -> f64 {
    let g = p * q;
    (p - q).powi(2 * (t as i32 + 1)) / (g.powi(t as i32) * g.sqrt())
}

fn b_term(i: u8, p: f64, q: f64) -> f64 {
    let d = p - q;
    let w = p.sqrt() - q.sqrt();
    let g = (p * q).sqrt();
    match i {
        1 => d.powi(4) / (p * q * g),
        2 => w.powi(4) / (p + q),
        3 => w.powi(4) / g,
        4 => d * d * w * w / ((p + q) * g),
        5 => d * d * w * w / (p * q),
        6 => d.powi(4) / (p * q * (p + q)),
        _ => unreachable!("B index out of range"),
    }
}

/// Per-term product form of a log-free difference measure, `None` for the
/// logarithmic pairs (their printed sum *is* the weighted difference).
fn diff_product_term(a: BaseId, b: BaseId, p: f64, q: f64) -> Option<f64> {
    use BaseId::*;
    let d = p - q;
    let w = p.sqrt() - q.sqrt();
    let g = (p * q).sqrt();
    let s = p + q;
    Some(match (a, b) {
        (Hellinger, Delta) => w.powi(4) / (4.0 * s),
        (K0, Delta) => d * d * w * w / (8.0 * g * s),
        (K0, Hellinger) => w.powi(4) / (8.0 * g),
        (Psi, Delta) => d.powi(4) / (16.0 * p * q * s),
        (Psi, Hellinger) => w.powi(4) * (s + 4.0 * g) / (16.0 * p * q),
        (Psi, K0) => d * d * w * w / (16.0 * p * q),
        (F, Delta) => d * d * w * w * (p * p + q * q + 2.0 * g * s + 6.0 * p * q) / (32.0 * g * g * g * s),
        (F, Hellinger) => w.powi(4) * (p * p + q * q + 4.0 * g * s + 10.0 * p * q) / (32.0 * g * g * g),
        (F, Psi) => {
            let v = p.sqrt() + q.sqrt();
            s * v * v * w.powi(4) / (32.0 * g * g * g)
        }
        (F, K0) => d.powi(4) / (32.0 * g * g * g),
        _ => return None,
    })
}

/// Per-term product form of the chain-gap measure `L_k`.
fn l_term(k: u8, p: f64, q: f64) -> f64 {
    let d = p - q;
    let w = p.sqrt() - q.sqrt();
    let g = (p * q).sqrt();
    let s = p + q;
    match k {
        1 | 2 => w.powi(6) / (16.0 * g * s),
        3 => w.powi(6) / (8.0 * g * s),
        4 => w.powi(8) / (64.0 * p * q * s),
        5 | 7 => d * d * w.powi(4) / (64.0 * p * q * s),
        6 => (s + 6.0 * g) * w.powi(6) / (64.0 * p * q * s),
        8 => w.powi(6) / (32.0 * p * q),
        9 => d * d * w.powi(4) / (32.0 * p * q * s),
        10 => (s + 4.0 * g) * w.powi(6) / (32.0 * p * q * s),
        11 => d * d * w.powi(4) / (128.0 * g * g * g),
        12 => d.powi(4) * w * w / (128.0 * g * g * g * s),
        13 => (s + 6.0 * g) * w.powi(6) / (128.0 * g * g * g),
        14 => d * d * w.powi(4) * (s + 4.0 * g) / (128.0 * g * g * g * s),
        15 => w.powi(6) * (s * s + 6.0 * g * s + 16.0 * p * q) / (128.0 * g * g * g * s),
        _ => unreachable!("L index out of range"),
    }
}

fn sum_terms(p: &Distribution, q: &Distribution, term: impl Fn(f64, f64) -> f64) -> f64 {
    let mut s = NeumaierSum::new();
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        s.add(term(pi, qi));
    }
    s.value()
}

/// Direct evaluation of the measure's printed sum (not via the generator).
///
/// For the ten log-free difference pairs and all fifteen gap measures this is
/// a single nonnegative product sum; for logarithmic difference pairs the
/// printed sum is itself the coefficient-weighted difference of base sums.
pub fn closed_form(
    id: MeasureId,
    p: &Distribution,
    q: &Distribution,
) -> Result<DivergenceValue, DivError> {
    check_dims(p, q)?;
    let value = match id {
        MeasureId::Base(b) => sum_terms(p, q, |pi, qi| base_term(b, pi, qi)),
        MeasureId::Kt(t) => sum_terms(p, q, |pi, qi| kt_term(t, pi, qi)),
        MeasureId::B(i) => sum_terms(p, q, |pi, qi| b_term(i, pi, qi)),
        MeasureId::ExpK => return exp_divergence(p, q),
        MeasureId::Diff(a, b) => match diff_product_term(a, b, 1.0, 1.0) {
            Some(_) => sum_terms(p, q, |pi, qi| diff_product_term(a, b, pi, qi).unwrap()),
            None => {
                let (wa, wb) = (WeightedId::canonical(a), WeightedId::canonical(b));
                sum_terms(p, q, |pi, qi| {
                    wa.coeff.as_f64() * base_term(a, pi, qi)
                        - wb.coeff.as_f64() * base_term(b, pi, qi)
                })
            }
        },
        MeasureId::L(k) => sum_terms(p, q, |pi, qi| l_term(k, pi, qi)),
        // The gap variants have no printed sum of their own; their closed
        // route is the defining node difference over stable product sums.
        MeasureId::Lv(k) => lv_node_difference(k, p, q),
    };
    Ok(wrap(id, value, p))
}

/// Whether `closed_form(id)` is a single product sum (an evaluation path
/// independent of, and as well-conditioned as, the generator functional).
pub fn has_product_form(id: MeasureId) -> bool {
    match id {
        MeasureId::Base(_) | MeasureId::Kt(_) | MeasureId::B(_) | MeasureId::ExpK => true,
        MeasureId::Diff(a, b) => diff_product_term(a, b, 1.0, 1.0).is_some(),
        MeasureId::L(_) => true,
        MeasureId::Lv(_) => false,
    }
}

/// `K_t(P||Q) = sum (p-q)^{2(t+1)} / (pq)^{(2t+1)/2}`.
pub fn k_t(t: u32, p: &Distribution, q: &Distribution) -> Result<DivergenceValue, DivError> {
    closed_form(MeasureId::Kt(t), p, q)
}

/// Exponential divergence `sum ((p-q)^2/sqrt(pq)) exp((p-q)^2/(pq))`.
/// Errors with `Overflow` when any exponent argument exceeds 700.
pub fn exp_divergence(p: &Distribution, q: &Distribution) -> Result<DivergenceValue, DivError> {
    check_dims(p, q)?;
    let mut s = NeumaierSum::new();
    for (index, (&pi, &qi)) in p.probs().iter().zip(q.probs()).enumerate() {
        let d = pi - qi;
        let arg = d * d / (pi * qi);
        if arg > EXP_OVERFLOW_ARG {
            return Err(DivError::Overflow { index, arg });
        }
        s.add(d * d / (pi * qi).sqrt() * arg.exp());
    }
    Ok(wrap(MeasureId::ExpK, s.value(), p))
}

/// Partial sum `sum_{t=0}^{T} K_t(P||Q)/t!`; nondecreasing in `T` and
/// converging to the exponential divergence.
pub fn partial_sum(
    t_max: u32,
    p: &Distribution,
    q: &Distribution,
) -> Result<DivergenceValue, DivError> {
    check_dims(p, q)?;
    let mut s = NeumaierSum::new();
    let mut factorial = 1.0;
    for t in 0..=t_max {
        if t > 0 {
            factorial *= f64::from(t);
        }
        s.add(k_t(t, p, q)?.value / factorial);
    }
    Ok(wrap(MeasureId::ExpK, s.value(), p))
}

/// Weighted difference `x.coeff * M_x - y.coeff * M_y` of two canonically
/// weighted chain members; restricted to chain-ordered pairs so nonnegativity
/// is an invariant rather than a hope.
pub fn difference(
    x: WeightedId,
    y: WeightedId,
    p: &Distribution,
    q: &Distribution,
) -> Result<DivergenceValue, DivError> {
    if x.coeff != x.id.chain_coeff() || y.coeff != y.id.chain_coeff() {
        return Err(MeasureError::InvalidPair(x.id.name(), y.id.name()).into());
    }
    let id = MeasureId::diff(x.id, y.id)?;
    check_dims(p, q)?;
    let mx = closed_form(MeasureId::Base(x.id), p, q)?.value;
    let my = closed_form(MeasureId::Base(y.id), p, q)?.value;
    Ok(wrap(id, x.coeff.as_f64() * mx - y.coeff.as_f64() * my, p))
}

/// The six nodes of the difference chain, evaluated through the stable
/// product forms of the `B` measures: `m = (B2/4, B4/16, B3/8, B6/64, B5/32,
/// B1/128)`.
pub fn chain_node(i: usize, p: &Distribution, q: &Distribution) -> Result<f64, DivError> {
    check_dims(p, q)?;
    let (b, c) = match i {
        1 => (2, 4.0),
        2 => (4, 16.0),
        3 => (3, 8.0),
        4 => (6, 64.0),
        5 => (5, 32.0),
        6 => (1, 128.0),
        _ => return Err(MeasureError::IndexOutOfRange(i as u8).into()),
    };
    Ok(closed_form(MeasureId::B(b), p, q)?.value / c)
}

const L_PAIRS: [(usize, usize); 15] = [
    (2, 1),
    (3, 2),
    (3, 1),
    (4, 3),
    (4, 2),
    (4, 1),
    (5, 4),
    (5, 3),
    (5, 2),
    (5, 1),
    (6, 5),
    (6, 4),
    (6, 3),
    (6, 2),
    (6, 1),
];

/// The node pair `(j, i)` with `L_k = m_j - m_i`.
pub fn l_chain_pair(k: u8) -> Result<(usize, usize), DivError> {
    MeasureId::l(k)?;
    Ok(L_PAIRS[(k - 1) as usize])
}

/// `L_k` evaluated via the canonical chain difference `m_j - m_i`.
pub fn l_measure(k: u8, p: &Distribution, q: &Distribution) -> Result<DivergenceValue, DivError> {
    let id = MeasureId::l(k)?;
    let (j, i) = L_PAIRS[(k - 1) as usize];
    let value = chain_node(j, p, q)? - chain_node(i, p, q)?;
    Ok(wrap(id, value, p))
}

/// Defining node difference of the unit-coefficient gap variant `Lv_k`
/// (nodes `D_{psi,k0} = 2 m5` and `D_{f,k0} = 4 m6` instead of `m5`, `m6`).
fn lv_node_difference(k: u8, p: &Distribution, q: &Distribution) -> f64 {
    let m = |i: usize| chain_node(i, p, q).expect("dims already checked");
    match k {
        7 => 2.0 * m(5) - m(4),
        8 => 2.0 * m(5) - m(3),
        9 => 2.0 * m(5) - m(2),
        12 => 4.0 * m(6) - m(4),
        13 => 4.0 * m(6) - m(3),
        14 => 4.0 * m(6) - m(2),
        15 => 4.0 * m(6) - m(1),
        _ => unreachable!("Lv index out of range"),
    }
}

/// Uniform entry point used by the verification engines: evaluates any
/// catalog measure through its most stable route.
pub fn value(id: MeasureId, p: &Distribution, q: &Distribution) -> Result<f64, DivError> {
    match id {
        MeasureId::Diff(a, b) => {
            difference(WeightedId::canonical(a), WeightedId::canonical(b), p, q).map(|v| v.value)
        }
        MeasureId::L(k) => l_measure(k, p, q).map(|v| v.value),
        MeasureId::Lv(_) => csiszar(&generator_for(id), p, q).map(|v| v.value),
        other => closed_form(other, p, q).map(|v| v.value),
    }
}

/// The per-term gap formulas exactly as printed in the source catalog,
/// kept verbatim for the erratum report (several do not match the chain
/// differences; `l_printed_matches_chain` records which).
pub fn l_printed_form(k: u8, p: &Distribution, q: &Distribution) -> Option<f64> {
    let term = |pi: f64, qi: f64| -> Option<f64> {
        let d = pi - qi;
        let w = pi.sqrt() - qi.sqrt();
        let g = (pi * qi).sqrt();
        let s = pi + qi;
        let v = pi.sqrt() + qi.sqrt();
        Some(match k {
            1 => w.powi(6) / (16.0 * g * s),
            4 => w.powi(8) / (64.0 * pi * qi * s),
            5 => d * d * w.powi(4) / (64.0 * pi * qi * s),
            6 => (s + 6.0 * g) * w * w / (64.0 * pi * qi * s),
            7 => (2.0 * s + w * w) * d * d * w * w / (64.0 * pi * qi * s),
            8 => s * w.powi(4) / (16.0 * pi * qi),
            9 => d * d * (w * w + g) * w * w / (16.0 * pi * qi * s),
            10 => (g * s + w * w) * w.powi(4) / (16.0 * pi * qi * s),
            11 => s * d * d * w * w / (32.0 * g * g * g),
            12 => (s + g + w * w) * d.powi(4) / (64.0 * g * g * g * s),
            13 => s * (s + 4.0 * g) * w.powi(4) / (64.0 * g * g * g * s),
            14 => (pi * pi + qi * qi + 2.0 * g * s) * v * v * w.powi(4) / (32.0 * g * g * g * s),
            15 => {
                let cubic = pi.powi(3) + qi.powi(3) + 4.0 * g * (pi * pi + qi * qi) + 7.0 * pi * qi * s;
                v * v * w.powi(4) * cubic / (32.0 * g * g * g * s)
            }
            _ => return None,
        })
    };
    term(1.0, 1.0)?;
    Some(sum_terms(p, q, |pi, qi| term(pi, qi).unwrap()))
}

/// Which printed gap formulas agree with the chain-difference construction.
pub fn l_printed_matches_chain(k: u8) -> Option<bool> {
    match k {
        1 | 4 | 5 => Some(true),
        6..=15 => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(v: &[f64]) -> Distribution {
        Distribution::from_weights(v, 1e-12).unwrap()
    }

    fn swapped() -> (Distribution, Distribution) {
        (dist(&[0.75, 0.25]), dist(&[0.25, 0.75]))
    }

    #[test]
    fn hand_values_at_the_swapped_pair() {
        let (p, q) = swapped();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        assert_eq!(closed_form(MeasureId::Base(BaseId::Delta), &p, &q).unwrap().value, 0.5);
        assert!(rel(closed_form(MeasureId::Base(BaseId::Hellinger), &p, &q).unwrap().value, 0.13397459621556135).abs() < 1e-15);
        assert!(rel(closed_form(MeasureId::Base(BaseId::K0), &p, &q).unwrap().value, 1.1547005383792515).abs() < 1e-15);
        assert!(rel(exp_divergence(&p, &q).unwrap().value, 4.380550360422747).abs() < 1e-14);
        let d = difference(
            WeightedId::canonical(BaseId::K0),
            WeightedId::canonical(BaseId::Hellinger),
            &p,
            &q,
        )
        .unwrap();
        assert!(rel(d.value, 0.010362971081845088) < 1e-12);
        assert!(rel(l_measure(1, &p, &q).unwrap().value, 0.0006941874331418673) < 1e-12);
    }

    #[test]
    fn csiszar_of_delta_generator() {
        let (p, q) = swapped();
        let g = generator_for(MeasureId::Base(BaseId::Delta));
        let v = csiszar(&g, &p, &q).unwrap().value;
        assert!((v - 0.5).abs() < 1e-15);
        let z = csiszar(&g, &p, &p).unwrap().value;
        assert!(z.abs() <= 1e-12);
    }

    #[test]
    fn kt_ties_to_k0_and_b1() {
        let (p, q) = swapped();
        let k0 = closed_form(MeasureId::Base(BaseId::K0), &p, &q).unwrap().value;
        assert_eq!(k_t(0, &p, &q).unwrap().value, k0);
        let b1 = closed_form(MeasureId::B(1), &p, &q).unwrap().value;
        assert_eq!(k_t(1, &p, &q).unwrap().value, b1);
        assert!(k_t(2, &p, &p).unwrap().value.abs() <= 1e-12);
    }

    #[test]
    fn partial_sums_are_nondecreasing_and_bounded_by_exp() {
        let (p, q) = swapped();
        let e = exp_divergence(&p, &q).unwrap().value;
        let mut prev = 0.0;
        for t in 0..=20 {
            let s = partial_sum(t, &p, &q).unwrap().value;
            assert!(s >= prev, "t={t}");
            assert!(s <= e * (1.0 + 1e-15), "t={t}");
            prev = s;
        }
        let k0 = k_t(0, &p, &q).unwrap().value;
        assert_eq!(partial_sum(0, &p, &q).unwrap().value, k0);
    }

    #[test]
    fn overflow_is_reported_not_infinite() {
        let p = dist(&[1.0 - 1e-9, 1e-9]);
        let q = dist(&[1e-9, 1.0 - 1e-9]);
        match exp_divergence(&p, &q) {
            Err(DivError::Overflow { arg, .. }) => assert!(arg > EXP_OVERFLOW_ARG),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn difference_rejects_disordered_or_noncanonical_pairs() {
        let (p, q) = swapped();
        let bad = difference(
            WeightedId::canonical(BaseId::Hellinger),
            WeightedId::canonical(BaseId::K0),
            &p,
            &q,
        );
        assert!(bad.is_err());
        let noncanon = difference(
            WeightedId { id: BaseId::K0, coeff: crate::measures::Ratio::new(1, 2) },
            WeightedId::canonical(BaseId::Hellinger),
            &p,
            &q,
        );
        assert!(noncanon.is_err());
    }

    #[test]
    fn dimension_mismatch_everywhere() {
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[0.2, 0.3, 0.5]);
        assert!(matches!(
            closed_form(MeasureId::Base(BaseId::Delta), &p, &q),
            Err(DivError::DimensionMismatch(2, 3))
        ));
        assert!(l_measure(3, &p, &q).is_err());
        assert!(partial_sum(2, &p, &q).is_err());
    }

    #[test]
    fn remark_identities_hold_at_a_point() {
        let (p, q) = swapped();
        let b3 = closed_form(MeasureId::B(3), &p, &q).unwrap().value;
        let dk0h = value(MeasureId::diff(BaseId::K0, BaseId::Hellinger).unwrap(), &p, &q).unwrap();
        assert!((b3 - 8.0 * dk0h).abs() <= 1e-14 * b3);
    }

    #[test]
    fn l_three_is_twice_l_one_and_l7_equals_l5() {
        let (p, q) = swapped();
        let l1 = l_measure(1, &p, &q).unwrap().value;
        let l2 = l_measure(2, &p, &q).unwrap().value;
        let l3 = l_measure(3, &p, &q).unwrap().value;
        let l5 = l_measure(5, &p, &q).unwrap().value;
        let l7 = l_measure(7, &p, &q).unwrap().value;
        assert!((l2 - l1).abs() <= 1e-14 * l1.abs());
        assert!((l3 - 2.0 * l1).abs() <= 1e-14 * l3.abs());
        assert!((l7 - l5).abs() <= 1e-14 * l5.abs());
    }
}
