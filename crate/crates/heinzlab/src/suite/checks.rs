//! Per-check evaluation logic behind [`super::run_check`].

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, singular_values, ComplexMatrix, HermitianPD};
use crate::matfun::{apply_monotone, fprime_opnorm, MonotoneFn};
use crate::means::{
    bhatia_alpha, f_x_scalar, fx_mean_integral, midpoint_ladder, trapezoid_ladder, MeanPair,
    MeanParams,
};
use crate::norms::NormKind;
use crate::quad::adaptive_simpson;
use crate::refine::HeinzBlocks;
use crate::tol::Tolerances;

use super::drissi::{default_ratio_grid, inside_drissi_interval};
use super::{ChainReport, CheckRun, InequalityReport, Instance, InstanceSpec};

pub(super) fn dispatch(
    id: &str,
    spec: &InstanceSpec,
    params: &MeanParams,
    requested_norms: &[NormKind],
    tol: f64,
    tols: &Tolerances,
) -> Result<CheckRun> {
    let ctx = Ctx {
        id,
        spec,
        params: *params,
        kinds: norm_kinds_for(spec.order, requested_norms)?,
        tol,
        tols,
    };
    match id {
        "INEQ-1.2" => check_drissi(&ctx),
        "INEQ-1.3" => check_heinz_vs_heron_style(&ctx),
        "INEQ-1.4" => check_two_thirds_chain(&ctx),
        "CHAIN-1.5" => check_split_heinz_heron_chain(&ctx),
        "INEQ-1.7" => check_convex_refinement(&ctx),
        "CHAIN-1.8" => check_norm_mean_chain(&ctx),
        "CHAIN-1.9" => check_block_integral_chain(&ctx),
        "INEQ-2.0.0" => check_difference_heinz(&ctx),
        "INEQ-2.0" => check_power_difference(&ctx),
        "INEQ-2.1" => check_scaled_difference(&ctx),
        "INEQ-2.2" => check_derivative_bound(&ctx),
        "INEQ-2.2.0" => check_inverse_power_difference(&ctx),
        "CHAIN-2.2.1" => check_refinement_ladder(&ctx),
        "CHAIN-2.10" => check_one_sided_chain(&ctx),
        "CHAIN-3.1" => check_heinz_sandwich(&ctx),
        "INEQ-ZHAO" => check_heinz_heron_loewner(&ctx),
        "CHAIN-3.7" => check_scalar_ladder(&ctx),
        "CHAIN-3.12" => check_lower_refinement_operator(&ctx),
        "CHAIN-3.13" => check_lower_refinement_scalar(&ctx),
        "CHAIN-3.14" => check_upper_refinement_operator(&ctx),
        "CHAIN-3.15" => check_upper_refinement_scalar(&ctx),
        other => Err(Error::invalid(format!("unknown check id '{other}'"))),
    }
}

struct Ctx<'a> {
    id: &'a str,
    spec: &'a InstanceSpec,
    params: MeanParams,
    kinds: Vec<NormKind>,
    tol: f64,
    tols: &'a Tolerances,
}

impl Ctx<'_> {
    fn instance(&self) -> Result<Instance> {
        self.spec.materialize(self.tols)
    }

    fn labels(&self) -> Vec<String> {
        self.kinds.iter().map(|k| k.to_string()).collect()
    }

    fn stage_values(&self, m: &ComplexMatrix) -> Result<Vec<f64>> {
        let sv = singular_values(m, self.tols)?;
        self.kinds
            .iter()
            .map(|k| k.of_singular_values(&sv))
            .collect()
    }

    fn report(&self, id: String, norm: String, lhs: f64, rhs: f64, margin: f64) -> InequalityReport {
        InequalityReport {
            id,
            params: self.params,
            norm,
            lhs,
            rhs,
            margin,
            pass: margin >= -self.tol * rhs.abs().max(1.0),
            tol_used: self.tol,
            instance: *self.spec,
        }
    }

    /// Reports for `lhs <= rhs` per norm kind.
    fn norm_reports(&self, id: String, lhs: &[f64], rhs: &[f64]) -> Vec<InequalityReport> {
        self.kinds
            .iter()
            .zip(lhs.iter().zip(rhs))
            .map(|(kind, (&l, &r))| self.report(id.clone(), kind.to_string(), l, r, r - l))
            .collect()
    }

    /// Assembles a chain over per-norm stage values, one report per adjacent
    /// pair per norm plus a chain table.
    fn norm_chain(&self, labels: Vec<String>, per_stage: Vec<Vec<f64>>) -> CheckRun {
        let mut reports = Vec::new();
        let mut margins = Vec::new();
        let mut worst = f64::INFINITY;
        for pair in per_stage.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            let mut row = Vec::with_capacity(self.kinds.len());
            for k in 0..self.kinds.len() {
                let margin = hi[k] - lo[k];
                row.push(margin);
                worst = worst.min(margin / hi[k].abs().max(1.0));
            }
            margins.push(row);
        }
        for (i, pair) in per_stage.windows(2).enumerate() {
            let id = format!("{}/{}<={}", self.id, labels[i], labels[i + 1]);
            reports.extend(self.norm_reports(id, &pair[0], &pair[1]));
        }
        let monotone = reports.iter().all(|r| r.pass);
        let chain = ChainReport {
            id: self.id.to_string(),
            params: self.params,
            instance: *self.spec,
            columns: self.labels(),
            stage_labels: labels,
            stage_values: per_stage,
            margins,
            monotone,
            worst_violation: worst,
            tol_used: self.tol,
        };
        CheckRun {
            reports,
            chains: vec![chain],
        }
    }

    /// Chain of Hermitian stages compared in the Loewner order.
    fn loewner_chain(&self, labels: Vec<String>, stages: Vec<ComplexMatrix>) -> Result<CheckRun> {
        let mut reports = Vec::new();
        let mut margins = Vec::new();
        let mut worst = f64::INFINITY;
        let mut traces = Vec::with_capacity(stages.len());
        for s in &stages {
            traces.push(vec![trace_re(s)]);
        }
        for (i, pair) in stages.windows(2).enumerate() {
            let diff = pair[1].sub(&pair[0])?.hermitize();
            let margin = hermitian_eig(&diff, self.tols)?.eigenvalues[0];
            let anchor = opnorm_hermitian(&pair[1], self.tols)?;
            worst = worst.min(margin / anchor.max(1.0));
            margins.push(vec![margin]);
            let id = format!("{}/{}<={}", self.id, labels[i], labels[i + 1]);
            let mut rep = self.report(id, "loewner".to_string(), anchor - margin, anchor, margin);
            rep.pass = margin >= -self.tol * anchor.max(1.0);
            reports.push(rep);
        }
        let monotone = reports.iter().all(|r| r.pass);
        let chain = ChainReport {
            id: self.id.to_string(),
            params: self.params,
            instance: *self.spec,
            columns: vec!["loewner".to_string()],
            stage_labels: labels,
            stage_values: traces,
            margins,
            monotone,
            worst_violation: worst,
            tol_used: self.tol,
        };
        Ok(CheckRun {
            reports,
            chains: vec![chain],
        })
    }

    /// Chain of plain scalars.
    fn scalar_chain(&self, labels: Vec<String>, values: Vec<f64>) -> CheckRun {
        let mut reports = Vec::new();
        let mut margins = Vec::new();
        let mut worst = f64::INFINITY;
        for (i, pair) in values.windows(2).enumerate() {
            let margin = pair[1] - pair[0];
            margins.push(vec![margin]);
            worst = worst.min(margin / pair[1].abs().max(1.0));
            let id = format!("{}/{}<={}", self.id, labels[i], labels[i + 1]);
            reports.push(self.report(id, "scalar".to_string(), pair[0], pair[1], margin));
        }
        let monotone = reports.iter().all(|r| r.pass);
        let chain = ChainReport {
            id: self.id.to_string(),
            params: self.params,
            instance: *self.spec,
            columns: vec!["scalar".to_string()],
            stage_labels: labels,
            stage_values: values.into_iter().map(|v| vec![v]).collect(),
            margins,
            monotone,
            worst_violation: worst,
            tol_used: self.tol,
        };
        CheckRun {
            reports,
            chains: vec![chain],
        }
    }
}

fn norm_kinds_for(order: usize, requested: &[NormKind]) -> Result<Vec<NormKind>> {
    let mut kinds: Vec<NormKind> = (1..=order).map(NormKind::KyFan).collect();
    for &k in requested {
        match k {
            NormKind::KyFan(i) => {
                // Indices beyond the instance order do not exist there.
                if i >= 1 && i <= order && !kinds.contains(&k) {
                    kinds.push(k);
                }
            }
            NormKind::Schatten(p) => {
                if p.is_nan() || p < 1.0 {
                    return Err(Error::invalid(format!(
                        "Schatten exponent must be >= 1, got {p}"
                    )));
                }
                if !kinds.contains(&k) {
                    kinds.push(k);
                }
            }
            _ => {
                if !kinds.contains(&k) {
                    kinds.push(k);
                }
            }
        }
    }
    Ok(kinds)
}

fn trace_re(m: &ComplexMatrix) -> f64 {
    (0..m.rows().min(m.cols())).map(|i| m.get(i, i).re).sum()
}

fn opnorm_hermitian(m: &ComplexMatrix, tols: &Tolerances) -> Result<f64> {
    let spec = hermitian_eig(&m.hermitize(), tols)?;
    Ok(spec
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max))
}

/// Operator norm of `A^p` for positive definite `A`.
fn power_opnorm(a: &HermitianPD, p: f64) -> f64 {
    if p >= 0.0 {
        a.max_eig().powf(p)
    } else {
        a.min_eig().powf(p)
    }
}

/// `(1 - alpha) A^{1/2} X B^{1/2} + alpha (AX + XB)/2`.
fn heron_style_matrix(inst: &Instance, blocks: &HeinzBlocks, alpha: f64) -> Result<ComplexMatrix> {
    let split = blocks.one_sided(0.5)?;
    let ax_xb = inst
        .a
        .matrix()
        .matmul(&inst.x)?
        .add(&inst.x.matmul(inst.b.matrix())?)?;
    split.scale(1.0 - alpha).add(&ax_xb.scale(0.5 * alpha))
}

// INEQ-1.2: the logarithmic mean dominates the Heinz mean exactly for nu
// inside the sharp interval. Inside: require a clean scan. Outside: require
// the scan to produce a counterexample (sharpness), reported with the
// orientation flipped so a found violation is the passing outcome.
fn check_drissi(ctx: &Ctx) -> Result<CheckRun> {
    let nu = ctx.params.nu;
    let grid = default_ratio_grid();
    let inside = inside_drissi_interval(nu);
    // Track the most violating grid point (largest heinz - log_mean).
    let mut worst_a = grid[0];
    let mut worst_gap = f64::NEG_INFINITY;
    for &a in &grid {
        let h = crate::means::heinz_scalar(a, 1.0, nu)?;
        let l = crate::means::log_mean(a, 1.0)?;
        if h - l > worst_gap {
            worst_gap = h - l;
            worst_a = a;
        }
    }
    let h = crate::means::heinz_scalar(worst_a, 1.0, nu)?;
    let l = crate::means::log_mean(worst_a, 1.0)?;
    let report = if inside {
        // Claim: H <= L on the whole grid; report it at the tightest point.
        ctx.report(
            format!("{}/dominated", ctx.id),
            "scalar".to_string(),
            h,
            l,
            l - h,
        )
    } else {
        // Claim: some grid point violates H <= L; flipping sides makes the
        // found violation the nonnegative margin.
        ctx.report(
            format!("{}/sharpness", ctx.id),
            "scalar".to_string(),
            l,
            h,
            h - l,
        )
    };
    Ok(CheckRun {
        reports: vec![report],
        chains: Vec::new(),
    })
}

// INEQ-1.3: half block norm vs the split/arithmetic combination.
fn check_heinz_vs_heron_style(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let g = ctx.stage_values(&blocks.block(ctx.params.nu)?.scale(0.5))?;
    let f = ctx.stage_values(&heron_style_matrix(&inst, &blocks, ctx.params.alpha)?)?;
    Ok(ctx.norm_chain(vec!["g(nu)".into(), "f(alpha)".into()], vec![g, f]))
}

// INEQ-1.4: split product, the block at 2/3, and the weighted combination
// parametrized by t = 2/alpha - 2.
fn check_two_thirds_chain(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let split = ctx.stage_values(&blocks.one_sided(0.5)?)?;
    let g23 = ctx.stage_values(&blocks.block(2.0 / 3.0)?.scale(0.5))?;
    let f = ctx.stage_values(&heron_style_matrix(&inst, &blocks, ctx.params.alpha)?)?;
    Ok(ctx.norm_chain(
        vec!["split-half".into(), "g(2/3)".into(), "f(alpha)".into()],
        vec![split, g23, f],
    ))
}

// CHAIN-1.5: split product below the Heinz block below the combination.
fn check_split_heinz_heron_chain(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let split = ctx.stage_values(&blocks.one_sided(0.5)?)?;
    let g = ctx.stage_values(&blocks.block(ctx.params.nu)?.scale(0.5))?;
    let f = ctx.stage_values(&heron_style_matrix(&inst, &blocks, ctx.params.alpha)?)?;
    Ok(ctx.norm_chain(
        vec!["split-half".into(), "g(nu)".into(), "f(alpha)".into()],
        vec![split, g, f],
    ))
}

// INEQ-1.7: g(nu) <= (4 r0 - 1) g(1/2) + 2 (1 - 2 r0) f(alpha).
fn check_convex_refinement(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let r0 = ctx.params.r0();
    let g = ctx.stage_values(&blocks.block(ctx.params.nu)?.scale(0.5))?;
    let g_half = ctx.stage_values(&blocks.block(0.5)?.scale(0.5))?;
    let f = ctx.stage_values(&heron_style_matrix(&inst, &blocks, ctx.params.alpha)?)?;
    let rhs: Vec<f64> = g_half
        .iter()
        .zip(&f)
        .map(|(&gh, &fv)| (4.0 * r0 - 1.0) * gh + 2.0 * (1.0 - 2.0 * r0) * fv)
        .collect();
    Ok(CheckRun {
        reports: ctx.norm_reports(ctx.id.to_string(), &g, &rhs),
        chains: Vec::new(),
    })
}

// CHAIN-1.8: twice the split product, the mean of block norms over
// [nu, 1-nu], and the block norm at nu. The middle stage is an integral of
// norms, evaluated per norm kind with singular values memoized across the
// shared quadrature nodes.
fn check_norm_mean_chain(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let nu = ctx.params.nu;
    let lo = nu.min(1.0 - nu);
    let hi = nu.max(1.0 - nu);

    let split2 = ctx.stage_values(&blocks.one_sided(0.5)?.scale(2.0))?;
    let outer = ctx.stage_values(&blocks.block(nu)?)?;

    // Validate once so the memoized closure cannot fail.
    let _ = singular_values(&blocks.block(lo)?, ctx.tols)?;
    let memo: RefCell<HashMap<u64, Vec<f64>>> = RefCell::new(HashMap::new());
    let sv_at = |t: f64| -> Vec<f64> {
        memo.borrow_mut()
            .entry(t.to_bits())
            .or_insert_with(|| {
                singular_values(&blocks.block(t).expect("finite weights"), ctx.tols)
                    .expect("convergent singular values")
            })
            .clone()
    };
    let mut mean_norms = Vec::with_capacity(ctx.kinds.len());
    for kind in &ctx.kinds {
        let f = |t: f64| kind.of_singular_values(&sv_at(t)).expect("validated kind");
        let scale = f(lo).max(f(hi)).max(f(0.5 * (lo + hi))) * (hi - lo);
        let eps = ctx.tols.quad_abs * scale.max(1.0);
        let integral = adaptive_simpson(f, lo, hi, eps, ctx.tols.quad_max_depth);
        mean_norms.push(integral / (hi - lo));
    }

    Ok(ctx.norm_chain(
        vec![
            "2*split-half".into(),
            "mean-of-norms".into(),
            "block(nu)".into(),
        ],
        vec![split2, mean_norms, outer],
    ))
}

// CHAIN-1.9: midpoint block, normalized block integral, endpoint average.
fn check_block_integral_chain(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let (alpha, beta) = (ctx.params.alpha, ctx.params.beta);
    let mid = ctx.stage_values(&blocks.block(0.5 * (alpha + beta))?)?;
    let mean = ctx.stage_values(
        &blocks
            .integral(alpha, beta, ctx.tols)?
            .scale(1.0 / (beta - alpha)),
    )?;
    let ends = ctx.stage_values(
        &blocks
            .block(alpha)?
            .add(&blocks.block(beta)?)?
            .scale(0.5),
    )?;
    Ok(ctx.norm_chain(
        vec![
            "midpoint-block".into(),
            "mean-integral".into(),
            "endpoint-avg".into(),
        ],
        vec![mid, mean, ends],
    ))
}

// INEQ-2.0.0: the antisymmetric block against |2 nu - 1| times the
// commutator-style difference.
fn check_difference_heinz(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let nu = ctx.params.nu;
    let lhs = ctx.stage_values(&blocks.block_diff(nu)?)?;
    let comm = ctx.stage_values(&blocks.commutator()?)?;
    let factor = (2.0 * nu - 1.0).abs();
    let rhs: Vec<f64> = comm.iter().map(|&c| factor * c).collect();
    Ok(CheckRun {
        reports: ctx.norm_reports(ctx.id.to_string(), &lhs, &rhs),
        chains: Vec::new(),
    })
}

// INEQ-2.0: |||A^r X - X B^r||| <= r max(||A^(r-1)||, ||B^(r-1)||) |||AX - XB|||.
fn check_power_difference(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let r = ctx.params.nu;
    let lhs = ctx.stage_values(&blocks.power_commutator(r)?)?;
    let comm = ctx.stage_values(&blocks.commutator()?)?;
    let factor = r * power_opnorm(&inst.a, r - 1.0).max(power_opnorm(&inst.b, r - 1.0));
    let rhs: Vec<f64> = comm.iter().map(|&c| factor * c).collect();
    Ok(CheckRun {
        reports: ctx.norm_reports(ctx.id.to_string(), &lhs, &rhs),
        chains: Vec::new(),
    })
}

// INEQ-2.1: alpha-scaled antisymmetric block against the alpha-power
// difference.
fn check_scaled_difference(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let (nu, alpha) = (ctx.params.nu, ctx.params.alpha);
    let lhs: Vec<f64> = ctx
        .stage_values(&blocks.block_diff(nu)?)?
        .iter()
        .map(|v| alpha * v)
        .collect();
    let pow_comm = ctx.stage_values(&blocks.power_commutator(alpha)?)?;
    let factor = (2.0 * nu - 1.0).abs()
        * power_opnorm(&inst.a, 1.0 - alpha).max(power_opnorm(&inst.b, 1.0 - alpha));
    let rhs: Vec<f64> = pow_comm.iter().map(|&c| factor * c).collect();
    Ok(CheckRun {
        reports: ctx.norm_reports(ctx.id.to_string(), &lhs, &rhs),
        chains: Vec::new(),
    })
}

const DERIVATIVE_BOUND_FNS: [MonotoneFn; 5] = [
    MonotoneFn::Power(0.1),
    MonotoneFn::Power(0.5),
    MonotoneFn::Power(0.9),
    MonotoneFn::Log,
    MonotoneFn::Identity,
];

// INEQ-2.2: |||f(A)X - Xf(B)||| <= max(||f'(A)||, ||f'(B)||) |||AX - XB|||
// for each supported operator monotone function.
fn check_derivative_bound(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let comm_matrix = blocks.commutator()?;
    let comm = ctx.stage_values(&comm_matrix)?;
    let mut reports = Vec::new();
    for f in DERIVATIVE_BOUND_FNS {
        // The identity map makes both sides the same matrix; reusing it keeps
        // the margin exactly zero instead of rounding-level.
        let diff = if f == MonotoneFn::Identity {
            comm_matrix.clone()
        } else {
            let fa = apply_monotone(f, &inst.a)?;
            let fb = apply_monotone(f, &inst.b)?;
            fa.matmul(&inst.x)?.sub(&inst.x.matmul(&fb)?)?
        };
        let lhs = ctx.stage_values(&diff)?;
        let factor = fprime_opnorm(f, &inst.a)?.max(fprime_opnorm(f, &inst.b)?);
        let rhs: Vec<f64> = comm.iter().map(|&c| factor * c).collect();
        reports.extend(ctx.norm_reports(format!("{}/f={}", ctx.id, f.label()), &lhs, &rhs));
    }
    Ok(CheckRun {
        reports,
        chains: Vec::new(),
    })
}

// INEQ-2.2.0: |||AX - XB||| <= (1/alpha) max(||A^(1-alpha)||, ||B^(1-alpha)||)
// |||A^alpha X - X B^alpha|||.
fn check_inverse_power_difference(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let alpha = ctx.params.alpha;
    let lhs = ctx.stage_values(&blocks.commutator()?)?;
    let pow_comm = ctx.stage_values(&blocks.power_commutator(alpha)?)?;
    let factor = power_opnorm(&inst.a, 1.0 - alpha).max(power_opnorm(&inst.b, 1.0 - alpha)) / alpha;
    let rhs: Vec<f64> = pow_comm.iter().map(|&c| factor * c).collect();
    Ok(CheckRun {
        reports: ctx.norm_reports(ctx.id.to_string(), &lhs, &rhs),
        chains: Vec::new(),
    })
}

// CHAIN-2.2.1: the full refinement ladder E_1 .. E_n, the normalized block
// integral, then F_m .. F_1.
fn check_refinement_ladder(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let (alpha, beta) = (ctx.params.alpha, ctx.params.beta);
    let (n, m) = (ctx.params.ladder_n, ctx.params.ladder_m);
    let mut labels = Vec::new();
    let mut stages = Vec::new();
    for depth in 1..=n {
        labels.push(format!("E{depth}"));
        stages.push(ctx.stage_values(&blocks.midpoint_refinement(alpha, beta, depth)?)?);
    }
    labels.push("mean-integral".into());
    stages.push(ctx.stage_values(
        &blocks
            .integral(alpha, beta, ctx.tols)?
            .scale(1.0 / (beta - alpha)),
    )?);
    for depth in (1..=m).rev() {
        labels.push(format!("F{depth}"));
        stages.push(ctx.stage_values(&blocks.trapezoid_refinement(alpha, beta, depth)?)?);
    }
    Ok(ctx.norm_chain(labels, stages))
}

// CHAIN-2.10: half block norm, the one-sided integral, the combination.
fn check_one_sided_chain(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let blocks = HeinzBlocks::new(&inst.a, &inst.b, &inst.x)?;
    let g = ctx.stage_values(&blocks.block(ctx.params.nu)?.scale(0.5))?;
    let integral = ctx.stage_values(&blocks.one_sided_integral(ctx.tols)?)?;
    let f = ctx.stage_values(&heron_style_matrix(&inst, &blocks, ctx.params.alpha)?)?;
    Ok(ctx.norm_chain(
        vec![
            "g(nu)".into(),
            "one-sided-integral".into(),
            "f(alpha)".into(),
        ],
        vec![g, integral, f],
    ))
}

// CHAIN-3.1: geometric <= Heinz <= arithmetic in the Loewner order.
fn check_heinz_sandwich(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let pair = MeanPair::new(&inst.a, &inst.b, ctx.tols)?;
    let stages = vec![
        pair.geom(0.5, ctx.tols)?.matrix().clone(),
        pair.heinz(ctx.params.nu)?,
        pair.arith(0.5)?,
    ];
    ctx.loewner_chain(
        vec!["gmean".into(), "heinz".into(), "amean".into()],
        stages,
    )
}

// INEQ-ZHAO: H_nu(A, B) <= K_(alpha(nu))(A, B) in the Loewner order.
fn check_heinz_heron_loewner(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let pair = MeanPair::new(&inst.a, &inst.b, ctx.tols)?;
    let heinz = pair.heinz(ctx.params.nu)?;
    let heron = pair.heron(bhatia_alpha(ctx.params.nu))?;
    ctx.loewner_chain(vec!["heinz".into(), "heron".into()], vec![heinz, heron])
}

// CHAIN-3.7: the scalar ladder sandwich for f_x with monotone intermediate
// depths.
fn check_scalar_ladder(ctx: &Ctx) -> Result<CheckRun> {
    let x = ctx.spec.scalar_x();
    let (alpha, beta) = (ctx.params.alpha, ctx.params.beta);
    let (n, m) = (ctx.params.ladder_n, ctx.params.ladder_m);
    let f = |t: f64| f_x_scalar(x, t).expect("x > 0");
    let mut labels = vec!["f(mid)".to_string()];
    let mut values = vec![f(0.5 * (alpha + beta))];
    for depth in 1..=n {
        labels.push(format!("phi{depth}"));
        values.push(midpoint_ladder(f, alpha, beta, depth)?);
    }
    labels.push("mean-integral".into());
    values.push(fx_mean_integral(x, alpha, beta)?);
    for depth in (1..=m).rev() {
        labels.push(format!("Phi{depth}"));
        values.push(trapezoid_ladder(f, alpha, beta, depth)?);
    }
    labels.push("endpoint-avg".into());
    values.push(0.5 * (f(alpha) + f(beta)));
    Ok(ctx.scalar_chain(labels, values))
}

// CHAIN-3.12: the lower refinement of the Heinz sandwich through the
// midpoint/trapezoid ladders over [nu, 1/2] and the odd-kernel term. Also
// logs (without asserting) the variant that replaces the quarter geometric
// term by a quarter arithmetic term in the depth-2 trapezoid position.
fn check_lower_refinement_operator(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let pair = MeanPair::new(&inst.a, &inst.b, ctx.tols)?;
    let nu = ctx.params.nu;
    let (n, m) = (ctx.params.ladder_n, ctx.params.ladder_m);
    let heinz_mid = pair.heinz(0.25 * (2.0 * nu + 1.0))?;
    let f_term = pair.f_nu(nu, ctx.tols)?.scale(1.0 / (2.0 * nu - 1.0));
    let heinz_nu = pair.heinz(nu)?;
    let gmean = pair.geom(0.5, ctx.tols)?.matrix().clone();
    let stages = vec![
        gmean.clone(),
        heinz_mid.clone(),
        pair.midpoint_ladder_op(nu, 0.5, n)?,
        f_term.clone(),
        pair.trapezoid_ladder_op(nu, 0.5, m)?,
        pair.trapezoid_ladder_op(nu, 0.5, 2)?,
        heinz_nu.scale(0.5).add(&gmean.scale(0.5))?,
        heinz_nu.clone(),
    ];
    let labels = vec![
        "gmean".to_string(),
        "heinz-mid".to_string(),
        format!("phi{n}"),
        "f-term".to_string(),
        format!("Phi{m}"),
        "Phi2".to_string(),
        "heinz-gmean-avg".to_string(),
        "heinz".to_string(),
    ];
    let mut run = ctx.loewner_chain(labels, stages)?;

    // Variant with the arithmetic quarter term: evaluated, margin logged,
    // never asserted (the huge tolerance makes the record unconditionally
    // passing while staying serializable).
    let variant = heinz_nu
        .scale(0.25)
        .add(&heinz_mid.scale(0.5))?
        .add(&pair.arith(0.5)?.scale(0.25))?;
    let diff = variant.sub(&f_term)?.hermitize();
    let margin = hermitian_eig(&diff, ctx.tols)?.eigenvalues[0];
    let anchor = opnorm_hermitian(&variant, ctx.tols)?;
    run.reports.push(InequalityReport {
        id: format!("{}/variant-3.2-arith", ctx.id),
        params: ctx.params,
        norm: "loewner".to_string(),
        lhs: anchor - margin,
        rhs: anchor,
        margin,
        pass: true,
        tol_used: f64::MAX,
        instance: *ctx.spec,
    });
    Ok(run)
}

// CHAIN-3.13: the scalar shadow of CHAIN-3.12.
fn check_lower_refinement_scalar(ctx: &Ctx) -> Result<CheckRun> {
    let x = ctx.spec.scalar_x();
    let nu = ctx.params.nu;
    let (n, m) = (ctx.params.ladder_n, ctx.params.ladder_m);
    let (lo, hi) = if nu < 0.5 { (nu, 0.5) } else { (0.5, nu) };
    let f = |t: f64| f_x_scalar(x, t).expect("x > 0");
    let values = vec![
        f(0.5),
        f(0.25 * (2.0 * nu + 1.0)),
        midpoint_ladder(f, lo, hi, n)?,
        fx_mean_integral(x, lo, hi)?,
        trapezoid_ladder(f, lo, hi, m)?,
        trapezoid_ladder(f, lo, hi, 2)?,
        0.5 * f(nu) + 0.5 * f(0.5),
        f(nu),
    ];
    let labels = vec![
        "sqrt".to_string(),
        "fx-mid".to_string(),
        format!("phi{n}"),
        "mean-integral".to_string(),
        format!("Phi{m}"),
        "Phi2".to_string(),
        "fx-sqrt-avg".to_string(),
        "fx(nu)".to_string(),
    ];
    Ok(ctx.scalar_chain(labels, values))
}

// CHAIN-3.14: the upper refinement through ladders over [0, r0] and the
// averaged odd-kernel pair.
fn check_upper_refinement_operator(ctx: &Ctx) -> Result<CheckRun> {
    let inst = ctx.instance()?;
    let pair = MeanPair::new(&inst.a, &inst.b, ctx.tols)?;
    let nu = ctx.params.nu;
    let r0 = ctx.params.r0();
    let (n, m) = (ctx.params.ladder_n, ctx.params.ladder_m);
    let heinz_nu = pair.heinz(nu)?;
    let amean = pair.arith(0.5)?;
    let f_pair = pair
        .f_nu(1.0, ctx.tols)?
        .add(&pair.f_nu(r0, ctx.tols)?)?
        .scale(1.0 / (2.0 * r0));
    let stages = vec![
        heinz_nu.clone(),
        pair.heinz(0.5 * r0)?,
        pair.midpoint_ladder_op(0.0, r0, n)?,
        f_pair,
        pair.trapezoid_ladder_op(0.0, r0, m)?,
        pair.trapezoid_ladder_op(0.0, r0, 2)?,
        heinz_nu.scale(0.5).add(&amean.scale(0.5))?,
        amean.clone(),
    ];
    let labels = vec![
        "heinz".to_string(),
        "heinz-half-r0".to_string(),
        format!("phi{n}"),
        "f-term".to_string(),
        format!("Phi{m}"),
        "Phi2".to_string(),
        "heinz-amean-avg".to_string(),
        "amean".to_string(),
    ];
    ctx.loewner_chain(labels, stages)
}

// CHAIN-3.15: the scalar shadow of CHAIN-3.14.
fn check_upper_refinement_scalar(ctx: &Ctx) -> Result<CheckRun> {
    let x = ctx.spec.scalar_x();
    let nu = ctx.params.nu;
    let r0 = ctx.params.r0();
    let (n, m) = (ctx.params.ladder_n, ctx.params.ladder_m);
    let f = |t: f64| f_x_scalar(x, t).expect("x > 0");
    let values = vec![
        f(nu),
        f(0.5 * r0),
        midpoint_ladder(f, 0.0, r0, n)?,
        fx_mean_integral(x, 0.0, r0)?,
        trapezoid_ladder(f, 0.0, r0, m)?,
        trapezoid_ladder(f, 0.0, r0, 2)?,
        0.5 * f(nu) + 0.5 * f(0.0),
        f(0.0),
    ];
    let labels = vec![
        "fx(nu)".to_string(),
        "fx-half-r0".to_string(),
        format!("phi{n}"),
        "mean-integral".to_string(),
        format!("Phi{m}"),
        "Phi2".to_string(),
        "fx-ends-avg".to_string(),
        "fx(0)".to_string(),
    ];
    Ok(ctx.scalar_chain(labels, values))
}
