//! Factored rational evaluation tables for difference and gap generators.
//!
//! Every second derivative in the catalog is a rational function of
//! `u = sqrt(x)`; each entry is stored as `(u-1)^k * num(u) / den(u)` with the
//! `(u-1)` multiplicity split off so evaluation near `x = 1` does not cancel.
//! Coefficient tables are exact integers derived from the generator algebra.

use crate::measures::BaseId;

pub(crate) struct Factored {
    pub k: i32,
    pub num: &'static [f64],
    pub den: &'static [f64],
}

#[inline]
fn horner(cs: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for &c in cs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

impl Factored {
    /// Evaluate at `x > 0`. `sqrt(x) - 1` is computed as `(x-1)/(sqrt(x)+1)`
    /// so the factored zero at `x = 1` keeps full relative accuracy.
    pub fn eval(&self, x: f64) -> f64 {
        let t = x.sqrt();
        let um1 = (x - 1.0) / (t + 1.0);
        um1.powi(self.k) * horner(self.num, t) / horner(self.den, t)
    }
}

/// Second derivative of the composed generator of `Diff(a, b)`.
pub(crate) fn diff_f2(a: BaseId, b: BaseId) -> &'static Factored {
    match (a, b) {
        (BaseId::I, BaseId::Delta) => &Factored { k: 2, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 2.0, 0.0, 6.0, 0.0, 6.0, 0.0, 2.0] },
        (BaseId::Hellinger, BaseId::Delta) => &Factored { k: 2, num: &[1.0, 2.0, 6.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 4.0, 0.0, 12.0, 0.0, 12.0, 0.0, 4.0] },
        (BaseId::Hellinger, BaseId::I) => &Factored { k: 2, num: &[1.0], den: &[0.0, 0.0, 0.0, 4.0, 0.0, 4.0] },
        (BaseId::J, BaseId::Delta) => &Factored { k: 2, num: &[1.0, 2.0, 7.0, 12.0, 7.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 8.0, 0.0, 24.0, 0.0, 24.0, 0.0, 8.0] },
        (BaseId::J, BaseId::I) => &Factored { k: 2, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 8.0, 0.0, 8.0] },
        (BaseId::J, BaseId::Hellinger) => &Factored { k: 2, num: &[1.0], den: &[0.0, 0.0, 0.0, 0.0, 8.0] },
        (BaseId::T, BaseId::Delta) => &Factored { k: 2, num: &[1.0, 2.0, 5.0, 8.0, 5.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 4.0, 0.0, 12.0, 0.0, 12.0, 0.0, 4.0] },
        (BaseId::T, BaseId::I) => &Factored { k: 2, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 4.0, 0.0, 4.0] },
        (BaseId::T, BaseId::Hellinger) => &Factored { k: 2, num: &[1.0, 1.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 4.0, 0.0, 4.0] },
        (BaseId::T, BaseId::J) => &Factored { k: 2, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 8.0, 0.0, 8.0] },
        (BaseId::K0, BaseId::Delta) => &Factored { k: 2, num: &[3.0, 6.0, 20.0, 34.0, 66.0, 34.0, 20.0, 6.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 32.0, 0.0, 96.0, 0.0, 96.0, 0.0, 32.0] },
        (BaseId::K0, BaseId::I) => &Factored { k: 2, num: &[3.0, 6.0, 14.0, 6.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 32.0, 0.0, 32.0] },
        (BaseId::K0, BaseId::Hellinger) => &Factored { k: 2, num: &[3.0, 6.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 32.0] },
        (BaseId::K0, BaseId::J) => &Factored { k: 2, num: &[3.0, 2.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 32.0] },
        (BaseId::K0, BaseId::T) => &Factored { k: 4, num: &[3.0, 4.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 32.0, 0.0, 32.0] },
        (BaseId::Psi, BaseId::Delta) => &Factored { k: 2, num: &[1.0, 2.0, 6.0, 10.0, 17.0, 24.0, 17.0, 10.0, 6.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 8.0, 0.0, 24.0, 0.0, 24.0, 0.0, 8.0] },
        (BaseId::Psi, BaseId::I) => &Factored { k: 2, num: &[1.0, 2.0, 4.0, 6.0, 4.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 8.0, 0.0, 8.0] },
        (BaseId::Psi, BaseId::Hellinger) => &Factored { k: 2, num: &[1.0, 2.0, 3.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 8.0] },
        (BaseId::Psi, BaseId::J) => &Factored { k: 2, num: &[1.0, 2.0, 2.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 8.0] },
        (BaseId::Psi, BaseId::T) => &Factored { k: 2, num: &[1.0, 2.0, 2.0, 2.0, 2.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 8.0, 0.0, 8.0] },
        (BaseId::Psi, BaseId::K0) => &Factored { k: 2, num: &[4.0, 5.0, 6.0, 5.0, 4.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 32.0] },
        (BaseId::F, BaseId::Delta) => &Factored { k: 2, num: &[15.0, 30.0, 90.0, 150.0, 257.0, 364.0, 492.0, 364.0, 257.0, 150.0, 90.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0, 0.0, 384.0, 0.0, 384.0, 0.0, 128.0] },
        (BaseId::F, BaseId::I) => &Factored { k: 2, num: &[15.0, 30.0, 60.0, 90.0, 122.0, 90.0, 60.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0, 0.0, 128.0] },
        (BaseId::F, BaseId::Hellinger) => &Factored { k: 2, num: &[15.0, 30.0, 45.0, 60.0, 45.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0] },
        (BaseId::F, BaseId::J) => &Factored { k: 2, num: &[15.0, 30.0, 45.0, 44.0, 45.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0] },
        (BaseId::F, BaseId::T) => &Factored { k: 2, num: &[15.0, 30.0, 60.0, 58.0, 58.0, 58.0, 60.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0, 0.0, 128.0] },
        (BaseId::F, BaseId::K0) => &Factored { k: 2, num: &[15.0, 30.0, 33.0, 36.0, 33.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0] },
        (BaseId::F, BaseId::Psi) => &Factored { k: 2, num: &[15.0, 14.0, 13.0, 12.0, 13.0, 14.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0] },
        _ => unreachable!("diff_f2: not a chain-ordered pair"),
    }
}

/// Generator value for the log-free `Diff(a, b)` pairs (product form).
pub(crate) fn diff_f(a: BaseId, b: BaseId) -> Option<&'static Factored> {
    Some(match (a, b) {
        (BaseId::Hellinger, BaseId::Delta) => &Factored { k: 4, num: &[1.0], den: &[4.0, 0.0, 4.0] },
        (BaseId::Psi, BaseId::Delta) => &Factored { k: 4, num: &[1.0, 4.0, 6.0, 4.0, 1.0], den: &[0.0, 0.0, 16.0, 0.0, 16.0] },
        (BaseId::Psi, BaseId::Hellinger) => &Factored { k: 4, num: &[1.0, 4.0, 1.0], den: &[0.0, 0.0, 16.0] },
        (BaseId::Psi, BaseId::K0) => &Factored { k: 4, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 16.0] },
        (BaseId::K0, BaseId::Delta) => &Factored { k: 4, num: &[1.0, 2.0, 1.0], den: &[0.0, 8.0, 0.0, 8.0] },
        (BaseId::K0, BaseId::Hellinger) => &Factored { k: 4, num: &[1.0], den: &[0.0, 8.0] },
        (BaseId::F, BaseId::Delta) => &Factored { k: 4, num: &[1.0, 4.0, 11.0, 16.0, 11.0, 4.0, 1.0], den: &[0.0, 0.0, 0.0, 32.0, 0.0, 32.0] },
        (BaseId::F, BaseId::Hellinger) => &Factored { k: 4, num: &[1.0, 4.0, 10.0, 4.0, 1.0], den: &[0.0, 0.0, 0.0, 32.0] },
        (BaseId::F, BaseId::Psi) => &Factored { k: 4, num: &[1.0, 2.0, 2.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 32.0] },
        (BaseId::F, BaseId::K0) => &Factored { k: 4, num: &[1.0, 4.0, 6.0, 4.0, 1.0], den: &[0.0, 0.0, 0.0, 32.0] },
        _ => return None,
    })
}

/// Generator value of the chain-gap measure `L(k)`, `k = 1..=15`.
pub(crate) fn l_f(k: u8) -> &'static Factored {
    match k {
        1 => &Factored { k: 6, num: &[1.0], den: &[0.0, 16.0, 0.0, 16.0] },
        2 => &Factored { k: 6, num: &[1.0], den: &[0.0, 16.0, 0.0, 16.0] },
        3 => &Factored { k: 6, num: &[1.0], den: &[0.0, 8.0, 0.0, 8.0] },
        4 => &Factored { k: 8, num: &[1.0], den: &[0.0, 0.0, 64.0, 0.0, 64.0] },
        5 => &Factored { k: 6, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 64.0, 0.0, 64.0] },
        6 => &Factored { k: 6, num: &[1.0, 6.0, 1.0], den: &[0.0, 0.0, 64.0, 0.0, 64.0] },
        7 => &Factored { k: 6, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 64.0, 0.0, 64.0] },
        8 => &Factored { k: 6, num: &[1.0], den: &[0.0, 0.0, 32.0] },
        9 => &Factored { k: 6, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 32.0, 0.0, 32.0] },
        10 => &Factored { k: 6, num: &[1.0, 4.0, 1.0], den: &[0.0, 0.0, 32.0, 0.0, 32.0] },
        11 => &Factored { k: 6, num: &[1.0, 2.0, 1.0], den: &[0.0, 0.0, 0.0, 128.0] },
        12 => &Factored { k: 6, num: &[1.0, 4.0, 6.0, 4.0, 1.0], den: &[0.0, 0.0, 0.0, 128.0, 0.0, 128.0] },
        13 => &Factored { k: 6, num: &[1.0, 6.0, 1.0], den: &[0.0, 0.0, 0.0, 128.0] },
        14 => &Factored { k: 6, num: &[1.0, 6.0, 10.0, 6.0, 1.0], den: &[0.0, 0.0, 0.0, 128.0, 0.0, 128.0] },
        15 => &Factored { k: 6, num: &[1.0, 6.0, 18.0, 6.0, 1.0], den: &[0.0, 0.0, 0.0, 128.0, 0.0, 128.0] },
        _ => unreachable!("l_f: index out of range"),
    }
}

/// Second derivative of the `L(k)` generator.
pub(crate) fn l_f2(k: u8) -> &'static Factored {
    match k {
        1 => &Factored { k: 4, num: &[3.0, 12.0, 25.0, 40.0, 25.0, 12.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 64.0, 0.0, 192.0, 0.0, 192.0, 0.0, 64.0] },
        2 => &Factored { k: 4, num: &[3.0, 12.0, 25.0, 40.0, 25.0, 12.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 64.0, 0.0, 192.0, 0.0, 192.0, 0.0, 64.0] },
        3 => &Factored { k: 4, num: &[3.0, 12.0, 25.0, 40.0, 25.0, 12.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 32.0, 0.0, 96.0, 0.0, 96.0, 0.0, 32.0] },
        4 => &Factored { k: 6, num: &[1.0, 3.0, 6.0, 8.0, 6.0, 3.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 32.0, 0.0, 96.0, 0.0, 96.0, 0.0, 32.0] },
        5 => &Factored { k: 4, num: &[2.0, 5.0, 14.0, 23.0, 32.0, 23.0, 14.0, 5.0, 2.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 64.0, 0.0, 192.0, 0.0, 192.0, 0.0, 64.0] },
        6 => &Factored { k: 4, num: &[1.0, 4.0, 13.0, 24.0, 36.0, 24.0, 13.0, 4.0, 1.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 32.0, 0.0, 96.0, 0.0, 96.0, 0.0, 32.0] },
        7 => &Factored { k: 4, num: &[2.0, 5.0, 14.0, 23.0, 32.0, 23.0, 14.0, 5.0, 2.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 64.0, 0.0, 192.0, 0.0, 192.0, 0.0, 64.0] },
        8 => &Factored { k: 4, num: &[4.0, 7.0, 4.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 64.0] },
        9 => &Factored { k: 4, num: &[2.0, 5.0, 14.0, 23.0, 32.0, 23.0, 14.0, 5.0, 2.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 32.0, 0.0, 96.0, 0.0, 96.0, 0.0, 32.0] },
        10 => &Factored { k: 4, num: &[4.0, 13.0, 40.0, 71.0, 104.0, 71.0, 40.0, 13.0, 4.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 64.0, 0.0, 192.0, 0.0, 192.0, 0.0, 64.0] },
        11 => &Factored { k: 4, num: &[15.0, 28.0, 34.0, 28.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 512.0] },
        12 => &Factored { k: 4, num: &[15.0, 44.0, 119.0, 224.0, 346.0, 424.0, 346.0, 224.0, 119.0, 44.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 512.0, 0.0, 1536.0, 0.0, 1536.0, 0.0, 512.0] },
        13 => &Factored { k: 4, num: &[15.0, 60.0, 90.0, 60.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 512.0] },
        14 => &Factored { k: 4, num: &[15.0, 60.0, 159.0, 336.0, 530.0, 680.0, 530.0, 336.0, 159.0, 60.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 512.0, 0.0, 1536.0, 0.0, 1536.0, 0.0, 512.0] },
        15 => &Factored { k: 4, num: &[15.0, 60.0, 183.0, 432.0, 730.0, 1000.0, 730.0, 432.0, 183.0, 60.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 512.0, 0.0, 1536.0, 0.0, 1536.0, 0.0, 512.0] },
        _ => unreachable!("l_f2: index out of range"),
    }
}

/// Generator value of the unit-coefficient gap variant `Lv(k)`.
pub(crate) fn lv_f(k: u8) -> &'static Factored {
    match k {
        7 => &Factored { k: 4, num: &[3.0, 4.0, 2.0, 4.0, 3.0], den: &[0.0, 0.0, 64.0, 0.0, 64.0] },
        8 => &Factored { k: 4, num: &[1.0, 0.0, 1.0], den: &[0.0, 0.0, 16.0] },
        9 => &Factored { k: 4, num: &[1.0, 1.0, 0.0, 1.0, 1.0], den: &[0.0, 0.0, 16.0, 0.0, 16.0] },
        12 => &Factored { k: 4, num: &[2.0, 7.0, 10.0, 10.0, 10.0, 7.0, 2.0], den: &[0.0, 0.0, 0.0, 64.0, 0.0, 64.0] },
        13 => &Factored { k: 4, num: &[1.0, 4.0, 2.0, 4.0, 1.0], den: &[0.0, 0.0, 0.0, 32.0] },
        14 => &Factored { k: 4, num: &[1.0, 4.0, 5.0, 4.0, 5.0, 4.0, 1.0], den: &[0.0, 0.0, 0.0, 32.0, 0.0, 32.0] },
        15 => &Factored { k: 4, num: &[1.0, 4.0, 7.0, 0.0, 7.0, 4.0, 1.0], den: &[0.0, 0.0, 0.0, 32.0, 0.0, 32.0] },
        _ => unreachable!("lv_f: index out of range"),
    }
}

/// Second derivative of the `Lv(k)` generator.
pub(crate) fn lv_f2(k: u8) -> &'static Factored {
    match k {
        7 => &Factored { k: 2, num: &[3.0, 3.0, 12.0, 10.0, 17.0, 6.0, 17.0, 10.0, 12.0, 3.0, 3.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 32.0, 0.0, 96.0, 0.0, 96.0, 0.0, 32.0] },
        8 => &Factored { k: 2, num: &[2.0, 1.0, 0.0, 1.0, 2.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 16.0] },
        9 => &Factored { k: 2, num: &[8.0, 7.0, 30.0, 20.0, 34.0, -6.0, 34.0, 20.0, 30.0, 7.0, 8.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 64.0, 0.0, 192.0, 0.0, 192.0, 0.0, 64.0] },
        12 => &Factored { k: 2, num: &[15.0, 26.0, 70.0, 102.0, 137.0, 160.0, 132.0, 160.0, 137.0, 102.0, 70.0, 26.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0, 0.0, 384.0, 0.0, 384.0, 0.0, 128.0] },
        13 => &Factored { k: 2, num: &[15.0, 30.0, 21.0, 12.0, 21.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0] },
        14 => &Factored { k: 2, num: &[15.0, 30.0, 72.0, 114.0, 137.0, 160.0, 96.0, 160.0, 137.0, 114.0, 72.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0, 0.0, 384.0, 0.0, 384.0, 0.0, 128.0] },
        15 => &Factored { k: 2, num: &[15.0, 30.0, 78.0, 126.0, 145.0, 164.0, 36.0, 164.0, 145.0, 126.0, 78.0, 30.0, 15.0], den: &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 128.0, 0.0, 384.0, 0.0, 384.0, 0.0, 128.0] },
        _ => unreachable!("lv_f2: index out of range"),
    }
}
