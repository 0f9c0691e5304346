//! Literal closed-form expressions for the (2,3) and (2,4) channel states,
//! plus reports quantifying how far they sit from the exact partial-trace
//! route.
//!
//! These expressions are reproduced verbatim, defects included: they violate
//! unit trace (and, for the (2,4) form, positivity), so they are quarantined
//! here, never validated as density operators, and never fed into any
//! physics pipeline. [`discrepancy_report`] measures the gap against the
//! exact channel; nothing in this module repairs the formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, Complex64, ComplexMatrix};
use crate::network::{channel_state, DmVector, NodePair};
use crate::state::DensityOperator;

/// The scalar coefficients of the closed forms, all functions of `dx * t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCoefficients {
    /// `(cos^4(dx t) + sin^4(dx t) + sin(2 dx t)) / 4` -- (2,3) identity weight.
    pub b1: f64,
    /// `cos^2(2 dx t) / 2` -- (2,3) inner off-diagonal weight.
    pub b2: f64,
    /// `sin^2(2 dx t) / 8` -- (2,3) outer off-diagonal weight.
    pub b3: f64,
    /// `(1 + sin^2(2 dx t)) / 4` -- (2,4) identity weight.
    pub t1: f64,
    /// `3 (1 + sin^2(2 dx t)) / 8` -- (2,4) anti-diagonal weight.
    pub t2: f64,
}

impl ClosedFormCoefficients {
    pub fn new(dx: f64, t: f64) -> Self {
        let a = dx * t;
        let sin_2a_sq = (2.0 * a).sin().powi(2);
        Self {
            b1: 0.25 * (a.cos().powi(4) + a.sin().powi(4) + (2.0 * a).sin()),
            b2: 0.5 * (2.0 * a).cos().powi(2),
            b3: 0.125 * sin_2a_sq,
            t1: 0.25 * (1.0 + sin_2a_sq),
            t2: 0.375 * (1.0 + sin_2a_sq),
        }
    }
}

/// Closed form for the (2,3) channel:
/// `B1 I + B2 (|01><10| + |10><01|) + B3 (|11><00| + |00><11|)`.
///
/// The identity is read as 4x4 (a 2x2 identity cannot enter a two-qubit
/// operator sum). Not a valid density operator in general: `tr = 4 B1 != 1`.
pub fn closed_form_rho23(dx: f64, t: f64) -> ComplexMatrix {
    let k = ClosedFormCoefficients::new(dx, t);
    let mut m = ComplexMatrix::identity(4).scaled_real(k.b1);
    m[(1, 2)] += Complex64::new(k.b2, 0.0);
    m[(2, 1)] += Complex64::new(k.b2, 0.0);
    m[(0, 3)] += Complex64::new(k.b3, 0.0);
    m[(3, 0)] += Complex64::new(k.b3, 0.0);
    m
}

/// Closed form for the (2,4) channel:
/// `T1 I + T2 (|00><11| + |01><10| + |10><01| + |11><00|)`.
///
/// Not a valid density operator: `tr = 4 T1 = 1 + sin^2(2 dx t)`, and the
/// anti-diagonal weight `T2` exceeds any positive state's bound.
pub fn closed_form_rho24(dx: f64, t: f64) -> ComplexMatrix {
    let k = ClosedFormCoefficients::new(dx, t);
    let mut m = ComplexMatrix::identity(4).scaled_real(k.t1);
    for (i, j) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
        m[(i, j)] += Complex64::new(k.t2, 0.0);
    }
    m
}

/// How far a closed form sits from the exact channel at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub pair: NodePair,
    pub dx: f64,
    pub t: f64,
    /// `|tr - 1|` of the closed form.
    pub trace_defect: f64,
    /// Largest entrywise `|closed form - exact channel|`.
    pub max_entry_delta: f64,
    /// Smallest eigenvalue of the closed form.
    pub min_eigenvalue: f64,
}

/// Compare the closed form for `pair` against an already-computed exact
/// channel state. The oracle is compared as-is; the closed form is never
/// normalised or otherwise repaired.
pub(crate) fn report_against(
    pair: NodePair,
    dx: f64,
    t: f64,
    exact: &DensityOperator,
) -> Result<DiscrepancyReport> {
    let closed = match (pair.a(), pair.b()) {
        (2, 3) => closed_form_rho23(dx, t),
        (2, 4) => closed_form_rho24(dx, t),
        _ => return Err(Error::UnsupportedPair(pair)),
    };
    let eig = eig_hermitian(&closed)?;
    Ok(DiscrepancyReport {
        pair,
        dx,
        t,
        trace_defect: (closed.trace().re - 1.0).abs(),
        max_entry_delta: closed.max_abs_diff(exact.matrix()),
        min_eigenvalue: *eig.eigenvalues.last().expect("dim >= 1"),
    })
}

/// Compare the closed form for `pair` (restricted to (2,3) and (2,4))
/// against the exact channel from the evolved network.
pub fn discrepancy_report(pair: NodePair, dx: f64, t: f64) -> Result<DiscrepancyReport> {
    // Reject unsupported pairs before paying for the evolution.
    if !matches!((pair.a(), pair.b()), (2, 3) | (2, 4)) {
        return Err(Error::UnsupportedPair(pair));
    }
    let exact = channel_state(pair, &DmVector::x(dx), t);
    report_against(pair, dx, t, &exact)
}
