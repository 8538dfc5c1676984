//! Machine-readable analysis output.

use serde::{Deserialize, Serialize};

use crate::criteria::{
    commensurable_check_with, harmonic_check_with, modal_transform, pure_dissipative_check_with,
    sync_check_spectral_with, sync_check_subspace_with, weak_coupling_bound_with,
    CommensurableReport, SyncVerdict, Synchronizes, Tolerances, WeakCouplingBound,
};
use crate::error::{Error, Result};
use crate::linalg::{complex_eig, sym_eig};
use crate::model::ArraySystem;

pub const TOOL: &str = "oscnet";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Ok,
    Discrepancy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub q: usize,
    pub n: usize,
    pub epsilon: f64,
    pub sigma: Vec<f64>,
}

/// `λ_2(G_kk)` and `Re λ_2(G_kk + j B_kk)` per mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModalSpectra {
    pub lambda2_g: Vec<Option<f64>>,
    pub re_lambda2_g_plus_jb: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub status: ReportStatus,
    pub model: ModelSummary,
    pub tolerances: Tolerances,
    pub spectral: SyncVerdict,
    pub subspace: SyncVerdict,
    pub modal: ModalSpectra,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure_dissipative: Option<SyncVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub harmonic: Option<SyncVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commensurable: Option<CommensurableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_coupling: Option<WeakCouplingBound>,
}

/// The two general methods disagree on the count, or both commit to
/// different verdicts.
pub fn methods_disagree(a: &SyncVerdict, b: &SyncVerdict) -> bool {
    let committed = a.synchronizes != Synchronizes::Indeterminate
        && b.synchronizes != Synchronizes::Indeterminate;
    a.imaginary_axis_count != b.imaginary_axis_count
        || (committed && a.synchronizes != b.synchronizes)
}

fn optional<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs every applicable check at the graph's `ε`.
pub fn analyze(sys: &ArraySystem, tol: &Tolerances) -> Result<AnalysisReport> {
    let epsilon = sys.graph().epsilon();
    let spectral = sync_check_spectral_with(sys, epsilon, tol)?;
    let subspace = sync_check_subspace_with(sys, epsilon, tol)?;
    let modal = modal_transform(sys, epsilon)?;
    let mut lambda2_g = Vec::new();
    let mut re_lambda2 = Vec::new();
    for k in 0..sys.n() {
        lambda2_g.push(sym_eig(&modal.g_block(k, k))?.values.get(1).copied());
        re_lambda2.push(complex_eig(&modal.diagonal_pencil(k))?.get(1).map(|z| z.re));
    }
    let pure_dissipative = optional(pure_dissipative_check_with(sys, tol))?;
    let harmonic = optional(harmonic_check_with(sys, tol))?;
    let commensurable = optional(commensurable_check_with(sys, tol))?;
    let weak_coupling = optional(weak_coupling_bound_with(sys, tol))?;
    let status = if methods_disagree(&spectral, &subspace) {
        ReportStatus::Discrepancy
    } else {
        ReportStatus::Ok
    };
    Ok(AnalysisReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        status,
        model: ModelSummary {
            q: sys.q(),
            n: sys.n(),
            epsilon,
            sigma: sys.sigma().to_vec(),
        },
        tolerances: *tol,
        spectral,
        subspace,
        modal: ModalSpectra {
            lambda2_g,
            re_lambda2_g_plus_jb: re_lambda2,
        },
        pure_dissipative,
        harmonic,
        commensurable,
        weak_coupling,
    })
}

/// Pretty JSON with shortest round-trip floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report is serializable");
    s.push('\n');
    s
}
