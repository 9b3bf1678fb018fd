//! Crossing-point location for two Weibull survival curves, the exact
//! perturbation oracle, and the closed-form scaling laws that describe how
//! parameter errors propagate into crossing-point errors.
//!
//! Two curves `S0(t) = exp(-(l0*t)^k0)` and `S1(t) = exp(-(l1*t)^k1)` with
//! unequal shapes cross at exactly one positive time,
//!
//! ```text
//! t_chi = exp(-(k1*ln(l1) - k0*ln(l0)) / (k1 - k0)).
//! ```
//!
//! All scaling-law functions return the *ratio* `t_chi' / t_chi`; subtract 1
//! for the signed relative error. In ratio form the lambda law and the
//! z-form shape law are exact identities with the oracle, while the
//! gamma-form shape law matches only to first order in the perturbation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weibull::WeibullParams;

/// Control (arm 0) and treatment (arm 1) survival curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePair {
    pub control: WeibullParams,
    pub treatment: WeibullParams,
}

impl CurvePair {
    pub fn new(control: WeibullParams, treatment: WeibullParams) -> Self {
        Self { control, treatment }
    }

    pub fn swapped(&self) -> Self {
        Self {
            control: self.treatment,
            treatment: self.control,
        }
    }

    /// Shape ratio `gamma = k1/k0`.
    pub fn gamma(&self) -> f64 {
        self.treatment.k() / self.control.k()
    }

    /// Failure ratio `z = lambda1/lambda0`.
    pub fn z(&self) -> f64 {
        self.treatment.lambda() / self.control.lambda()
    }
}

/// Where (if anywhere) the two survival curves meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossingResult {
    /// A single crossing at `t_chi` days.
    Unique { t_chi: f64 },
    /// Equal shapes, different failure rates: the curves never meet.
    NoneEqualShapes,
    /// Identical parameters: the curves coincide everywhere.
    IdenticalCurves,
}

impl CrossingResult {
    pub fn t_chi(&self) -> Option<f64> {
        match self {
            CrossingResult::Unique { t_chi } => Some(*t_chi),
            _ => None,
        }
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, CrossingResult::Unique { .. })
    }

    /// True when the crossing exists and falls inside the follow-up window
    /// `(0, window]` days.
    pub fn within(&self, window: f64) -> bool {
        self.t_chi().map(|t| t <= window).unwrap_or(false)
    }
}

/// Locate the crossing of the two survival curves.
///
/// Shape equality is tested exactly on the stored values: the formula is
/// well defined for arbitrarily close unequal shapes.
pub fn crossing_point(pair: &CurvePair) -> CrossingResult {
    let (l0, k0) = (pair.control.lambda(), pair.control.k());
    let (l1, k1) = (pair.treatment.lambda(), pair.treatment.k());
    if k0 == k1 {
        return if l0 == l1 {
            CrossingResult::IdenticalCurves
        } else {
            CrossingResult::NoneEqualShapes
        };
    }
    let num = k1 * l1.ln() - k0 * l0.ln();
    let t_chi = (-num / (k1 - k0)).exp();
    CrossingResult::Unique { t_chi }
}

/// Signed relative error `t_perturbed / t_true - 1`.
pub fn relative_error(t_perturbed: f64, t_true: f64) -> Result<f64> {
    if !t_true.is_finite() || t_true <= 0.0 {
        return Err(Error::validation(format!(
            "reference crossing time must be finite and > 0, got {t_true}"
        )));
    }
    Ok(t_perturbed / t_true - 1.0)
}

/// Which parameter a perturbation applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationTarget {
    Lambda0,
    Lambda1,
    K0,
    K1,
}

impl PerturbationTarget {
    pub fn as_str(&self) -> &'static str {
        match self {
            PerturbationTarget::Lambda0 => "lambda0",
            PerturbationTarget::Lambda1 => "lambda1",
            PerturbationTarget::K0 => "k0",
            PerturbationTarget::K1 => "k1",
        }
    }
}

/// A signed relative perturbation of one parameter: the perturbed value is
/// `(1 + phi)` times the true one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    target: PerturbationTarget,
    phi: f64,
}

impl Perturbation {
    pub fn new(target: PerturbationTarget, phi: f64) -> Result<Self> {
        if !phi.is_finite() || phi <= -1.0 {
            return Err(Error::validation(format!(
                "phi must be finite and > -1 so the perturbed parameter stays positive, got {phi}"
            )));
        }
        Ok(Self { target, phi })
    }

    pub fn target(&self) -> PerturbationTarget {
        self.target
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The pair with the targeted parameter scaled by `1 + phi`.
    pub fn apply(&self, pair: &CurvePair) -> CurvePair {
        let scale = 1.0 + self.phi;
        let (mut l0, mut k0) = (pair.control.lambda(), pair.control.k());
        let (mut l1, mut k1) = (pair.treatment.lambda(), pair.treatment.k());
        match self.target {
            PerturbationTarget::Lambda0 => l0 *= scale,
            PerturbationTarget::Lambda1 => l1 *= scale,
            PerturbationTarget::K0 => k0 *= scale,
            PerturbationTarget::K1 => k1 *= scale,
        }
        // scale > 0 and the original values are valid, so this cannot fail.
        CurvePair::new(
            WeibullParams::new(l0, k0).expect("perturbed control stays valid"),
            WeibullParams::new(l1, k1).expect("perturbed treatment stays valid"),
        )
    }
}

/// Exact oracle: apply the perturbation and relocate the crossing from the
/// closed form. A perturbation that drives the shapes equal yields
/// `NoneEqualShapes`, not an error.
pub fn perturbed_crossing(pair: &CurvePair, pert: &Perturbation) -> CrossingResult {
    crossing_point(&pert.apply(pair))
}

/// System-level quantities the scaling laws depend on.
///
/// `r` is defined only when the failure rates differ (`z != 1`); whenever
/// both are derived from the same pair with a unique crossing,
/// `gamma = r / (1 + r)` holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityContext {
    pub gamma: f64,
    pub z: f64,
    pub r: Option<f64>,
}

impl SensitivityContext {
    pub fn from_pair(pair: &CurvePair) -> Result<Self> {
        let gamma = pair.gamma();
        let z = pair.z();
        let r = match crossing_point(pair) {
            CrossingResult::Unique { t_chi } if z != 1.0 => {
                Some((pair.control.lambda() * t_chi).ln() / z.ln())
            }
            CrossingResult::Unique { .. } => None,
            _ => {
                return Err(Error::degenerate(
                    "sensitivity context requires a unique crossing".to_string(),
                ))
            }
        };
        Ok(Self { gamma, z, r })
    }
}

/// Scaling of the crossing under a `lambda1` perturbation:
/// `(1/(1+phi))^((1 - k0/k1)^-1)`.
///
/// This is an exact identity: it equals the oracle ratio `t_chi'/t_chi`
/// for a `lambda1` perturbation, so `law_lambda - 1` is the exact signed
/// relative error.
pub fn law_lambda(phi: f64, k0: f64, k1: f64) -> Result<f64> {
    if !phi.is_finite() || phi <= -1.0 {
        return Err(Error::validation(format!(
            "phi must be finite and > -1, got {phi}"
        )));
    }
    if k0 == k1 {
        return Err(Error::degenerate(
            "equal shapes leave the law exponent undefined".to_string(),
        ));
    }
    let exponent = 1.0 / (1.0 - k0 / k1);
    Ok((-(1.0 + phi).ln() * exponent).exp())
}

/// Gamma-form scaling of the crossing under a `k1` perturbation:
/// `(lambda0*t_chi)^([(1-gamma)(1/phi + 1/(1+gamma^-1))]^-1)` with
/// `gamma = k1/k0`.
///
/// Asymptotic: agrees with the exact oracle ratio to first order in `phi`;
/// the gap shrinks as `O(phi^2)`.
pub fn law_k_gamma(phi: f64, pair: &CurvePair) -> Result<f64> {
    if !phi.is_finite() || phi == 0.0 || phi <= -1.0 {
        return Err(Error::validation(format!(
            "phi must be finite, nonzero and > -1, got {phi}"
        )));
    }
    let gamma = pair.gamma();
    if gamma == 1.0 {
        return Err(Error::degenerate(
            "gamma = 1 leaves the exponent undefined".to_string(),
        ));
    }
    let t_chi = match crossing_point(pair) {
        CrossingResult::Unique { t_chi } => t_chi,
        _ => return Err(Error::degenerate("pair has no unique crossing".to_string())),
    };
    let u = (pair.control.lambda() * t_chi).ln();
    let exponent = 1.0 / ((1.0 - gamma) * (1.0 / phi + 1.0 / (1.0 + 1.0 / gamma)));
    Ok((u * exponent).exp())
}

/// Z-form scaling of the crossing under a `k1` perturbation:
/// `z^([(1/(1+r)) (1/(phi*r) - 1)]^-1)` with `z = lambda1/lambda0` and
/// `r = ln(lambda0*t_chi)/ln(z)`.
///
/// Algebraically identical to the exact oracle ratio, so `law_k_z - 1` is
/// the exact signed relative error whenever it is defined.
pub fn law_k_z(phi: f64, pair: &CurvePair) -> Result<f64> {
    if !phi.is_finite() || phi <= -1.0 {
        return Err(Error::validation(format!(
            "phi must be finite and > -1, got {phi}"
        )));
    }
    let z = pair.z();
    if z == 1.0 {
        return Err(Error::degenerate("z = 1 leaves r undefined".to_string()));
    }
    let t_chi = match crossing_point(pair) {
        CrossingResult::Unique { t_chi } => t_chi,
        _ => return Err(Error::degenerate("pair has no unique crossing".to_string())),
    };
    let r = (pair.control.lambda() * t_chi).ln() / z.ln();
    if phi * r == 1.0 {
        return Err(Error::degenerate(
            "phi*r = 1: the perturbation drives the shapes equal".to_string(),
        ));
    }
    let exponent = (1.0 + r) * phi * r / (1.0 - phi * r);
    Ok((z.ln() * exponent).exp())
}

/// Solve for the treatment failure rate that puts the crossing at `t_chi`
/// given the treatment shape: `ln(l1) = (k0/k1) ln(l0*t_chi) - ln(t_chi)`.
pub fn solve_treatment_lambda(
    control: &WeibullParams,
    k1: f64,
    t_chi: f64,
) -> Result<WeibullParams> {
    if !t_chi.is_finite() || t_chi <= 0.0 {
        return Err(Error::validation(format!(
            "t_chi must be finite and > 0, got {t_chi}"
        )));
    }
    if k1 == control.k() {
        return Err(Error::degenerate(
            "equal shapes admit no crossing to place".to_string(),
        ));
    }
    let u = (control.lambda() * t_chi).ln();
    let lambda1 = ((control.k() / k1) * u - t_chi.ln()).exp();
    WeibullParams::new(lambda1, k1)
}

/// Solve for the treatment shape that puts the crossing at `t_chi` given the
/// treatment failure rate: `k1 = k0 ln(l0*t_chi) / ln(l1*t_chi)`.
///
/// Singular when `l1*t_chi = 1` (the required shape is unbounded) and
/// infeasible when the solved shape comes out non-positive or equal to the
/// control shape.
pub fn solve_treatment_shape(
    control: &WeibullParams,
    lambda1: f64,
    t_chi: f64,
) -> Result<WeibullParams> {
    if !t_chi.is_finite() || t_chi <= 0.0 {
        return Err(Error::validation(format!(
            "t_chi must be finite and > 0, got {t_chi}"
        )));
    }
    let denom = (lambda1 * t_chi).ln();
    if denom == 0.0 {
        return Err(Error::degenerate(
            "lambda1 * t_chi = 1: shape solve is singular".to_string(),
        ));
    }
    let k1 = control.k() * (control.lambda() * t_chi).ln() / denom;
    if k1 <= 0.0 || !k1.is_finite() {
        return Err(Error::degenerate(format!(
            "no positive shape places the crossing at {t_chi} (solved k1 = {k1})"
        )));
    }
    if k1 == control.k() {
        return Err(Error::degenerate(
            "solved shape equals the control shape: curves coincide".to_string(),
        ));
    }
    WeibullParams::new(lambda1, k1)
}

/// What the first column of a sensitivity grid row ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AbscissaKind {
    Phi,
    Gamma,
    Z,
}

impl AbscissaKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AbscissaKind::Phi => "phi",
            AbscissaKind::Gamma => "gamma",
            AbscissaKind::Z => "z",
        }
    }
}

/// Optional second axis for a sensitivity grid: sweep the shape ratio or the
/// failure ratio while holding the control curve and the crossing time fixed.
#[derive(Debug, Clone, PartialEq)]
pub enum SensitivitySweep {
    /// Sweep `gamma = k1/k0`; `lambda1` is re-solved to keep `t_chi` fixed.
    Gamma(Vec<f64>),
    /// Sweep `z = lambda1/lambda0`; `k1` is re-solved to keep `t_chi` fixed.
    Z(Vec<f64>),
}

/// One sensitivity-grid row. `None` fields mark grid points where the law or
/// the oracle is undefined; they export as empty CSV fields.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub abscissa: f64,
    pub abscissa_kind: AbscissaKind,
    pub phi: f64,
    pub target: PerturbationTarget,
    pub exact_ratio: Option<f64>,
    pub law_ratio: Option<f64>,
}

impl GridRow {
    pub fn exact_rel_err(&self) -> Option<f64> {
        self.exact_ratio.map(|r| r - 1.0)
    }

    pub fn law_rel_err(&self) -> Option<f64> {
        self.law_ratio.map(|r| r - 1.0)
    }
}

/// The scaling law matched to a target, arm-swapping for control-arm targets.
///
/// For a `k` target the z-form is used on plain phi grids and z sweeps (it
/// is exact there) and the gamma-form on gamma sweeps.
fn law_ratio_for(
    pair: &CurvePair,
    target: PerturbationTarget,
    phi: f64,
    kind: AbscissaKind,
) -> Option<f64> {
    let (oriented, is_lambda) = match target {
        PerturbationTarget::Lambda1 => (*pair, true),
        PerturbationTarget::Lambda0 => (pair.swapped(), true),
        PerturbationTarget::K1 => (*pair, false),
        PerturbationTarget::K0 => (pair.swapped(), false),
    };
    if is_lambda {
        law_lambda(phi, oriented.control.k(), oriented.treatment.k()).ok()
    } else if kind == AbscissaKind::Gamma {
        law_k_gamma(phi, &oriented).ok()
    } else {
        law_k_z(phi, &oriented).ok()
    }
}

fn grid_row(
    pair: &CurvePair,
    target: PerturbationTarget,
    phi: f64,
    abscissa: f64,
    kind: AbscissaKind,
) -> GridRow {
    let base = crossing_point(pair);
    let exact_ratio = match (base.t_chi(), Perturbation::new(target, phi)) {
        (Some(t0), Ok(pert)) => perturbed_crossing(pair, &pert).t_chi().map(|t1| t1 / t0),
        _ => None,
    };
    let law_ratio = if phi == 0.0 {
        // The laws all give ratio 1 in the unperturbed limit; the gamma-form
        // hits 1/phi, so handle the limit explicitly.
        base.is_unique().then_some(1.0)
    } else {
        law_ratio_for(pair, target, phi, kind)
    };
    GridRow {
        abscissa,
        abscissa_kind: kind,
        phi,
        target,
        exact_ratio,
        law_ratio,
    }
}

/// Tabulate exact and scaling-law crossing errors over a phi grid and an
/// optional gamma or z sweep, one row per grid point. Points violating a
/// precondition become rows with empty exact/law fields rather than being
/// dropped.
pub fn sensitivity_grid(
    pair: &CurvePair,
    target: PerturbationTarget,
    phi_grid: &[f64],
    sweep: Option<&SensitivitySweep>,
) -> Result<Vec<GridRow>> {
    if phi_grid.is_empty() {
        return Err(Error::validation("phi grid must be non-empty".to_string()));
    }
    if let Some(p) = phi_grid.iter().find(|p| !p.is_finite() || **p <= -1.0) {
        return Err(Error::validation(format!(
            "phi grid values must be finite and > -1, got {p}"
        )));
    }

    let mut rows = Vec::new();
    match sweep {
        None => {
            for &phi in phi_grid {
                rows.push(grid_row(pair, target, phi, phi, AbscissaKind::Phi));
            }
        }
        Some(SensitivitySweep::Gamma(gammas)) => {
            if gammas.is_empty() {
                return Err(Error::validation(
                    "gamma sweep must be non-empty".to_string(),
                ));
            }
            let t_chi = crossing_point(pair).t_chi().ok_or_else(|| {
                Error::degenerate("sweeps require a base pair with a unique crossing".to_string())
            })?;
            for &gamma in gammas {
                let swept = solve_treatment_lambda(&pair.control, gamma * pair.control.k(), t_chi)
                    .map(|treatment| CurvePair::new(pair.control, treatment));
                for &phi in phi_grid {
                    match &swept {
                        Ok(p) => rows.push(grid_row(p, target, phi, gamma, AbscissaKind::Gamma)),
                        Err(_) => rows.push(GridRow {
                            abscissa: gamma,
                            abscissa_kind: AbscissaKind::Gamma,
                            phi,
                            target,
                            exact_ratio: None,
                            law_ratio: None,
                        }),
                    }
                }
            }
        }
        Some(SensitivitySweep::Z(zs)) => {
            if zs.is_empty() {
                return Err(Error::validation("z sweep must be non-empty".to_string()));
            }
            let t_chi = crossing_point(pair).t_chi().ok_or_else(|| {
                Error::degenerate("sweeps require a base pair with a unique crossing".to_string())
            })?;
            for &z in zs {
                let swept = solve_treatment_shape(&pair.control, z * pair.control.lambda(), t_chi)
                    .map(|treatment| CurvePair::new(pair.control, treatment));
                for &phi in phi_grid {
                    match &swept {
                        Ok(p) => rows.push(grid_row(p, target, phi, z, AbscissaKind::Z)),
                        Err(_) => rows.push(GridRow {
                            abscissa: z,
                            abscissa_kind: AbscissaKind::Z,
                            phi,
                            target,
                            exact_ratio: None,
                            law_ratio: None,
                        }),
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Write grid rows as CSV with header
/// `abscissa,abscissa_kind,phi,target,exact_ratio,law_ratio,exact_rel_err,law_rel_err`.
/// Undefined values are encoded as empty fields.
pub fn write_sensitivity_csv<W: std::io::Write>(rows: &[GridRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "abscissa",
        "abscissa_kind",
        "phi",
        "target",
        "exact_ratio",
        "law_ratio",
        "exact_rel_err",
        "law_rel_err",
    ])
    .map_err(csv_io)?;
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in rows {
        w.write_record([
            row.abscissa.to_string(),
            row.abscissa_kind.as_str().to_string(),
            row.phi.to_string(),
            row.target.as_str().to_string(),
            fmt(row.exact_ratio),
            fmt(row.law_ratio),
            fmt(row.exact_rel_err()),
            fmt(row.law_rel_err()),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
