use std::fs::File;
use std::io::{BufReader, Write};

use entlab_core::bounds::{self, BoundCurve, Direction};
use entlab_core::dense::{self, DENSE_CAP, PPT_TOLERANCE};
use entlab_core::durcirac::{
    bell_eigenvalues, ephi_average, fully_distillable, fully_separable, split_extremes, split_ppt,
    split_ppt_by_weight, DurCiracState, FanSeparabilityVariant, LambdaTable, PptVerdict,
};
use entlab_core::majorization::{self, BellPermutationGenerator};
use entlab_core::spectral::{log_negativity_display, negativity_one_split};
use entlab_core::{BellCircuit, BipartiteSplit, EpsilonMode, Error, ThermalSpec};
use rayon::prelude::*;

use crate::args::{
    BoundsArgs, CircuitArg, ClassifyArgs, Command, FeasibleArgs, NegativityArgs, PathArg,
    SearchArgs, SplitArg, ThresholdArgs,
};
use crate::{with_output, CliError};

/// Dense rows above this size run one at a time to bound memory.
const DENSE_PARALLEL_MAX_N: u64 = 10;

pub fn dispatch(command: &Command, flags: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Negativity(a) => negativity(a, flags, stdout),
        Command::Bounds(a) => bounds_table(a, flags, stdout),
        Command::Threshold(a) => threshold(a, flags, stdout),
        Command::Classify(a) => classify(a, flags, stdout),
        Command::Search(a) => search(a, flags, stdout),
        Command::Feasible(a) => feasible(a, flags, stdout),
    }
}

fn header(
    w: &mut dyn Write,
    command: &str,
    flags: &str,
    conjecture: &str,
    extra: &[String],
) -> Result<(), CliError> {
    writeln!(w, "# entlab {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# command: {command}")?;
    writeln!(w, "# flags: {flags}")?;
    writeln!(w, "# conjecture_dependent: {conjecture}")?;
    for line in extra {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

fn circuit(kind: CircuitArg, n: usize) -> BellCircuit {
    match kind {
        CircuitArg::Ch => BellCircuit::ch(n),
        CircuitArg::Chfan => BellCircuit::ch_fan(n),
    }
}

fn check_alpha(alpha: f64) -> Result<(), CliError> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(CliError::Usage(format!(
            "--alpha must be finite and non-negative, got {alpha}"
        )));
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

struct NegativityRow {
    n: u64,
    alpha: f64,
    log10_inv_alpha: f64,
    value: Option<f64>,
    path: &'static str,
    flag: &'static str,
}

fn alpha_grid(a: &NegativityArgs) -> Result<Vec<(f64, f64)>, CliError> {
    if a.points_per_decade == 0 {
        return Err(CliError::Usage(
            "--points-per-decade must be positive".into(),
        ));
    }
    let ppd = a.points_per_decade as f64;
    let count = ((a.alpha_decades.to - a.alpha_decades.from) * ppd).round() as u64 + 1;
    Ok((0..count)
        .map(|i| {
            let x = a.alpha_decades.from + i as f64 / ppd;
            (10f64.powf(-x), x)
        })
        .collect())
}

fn dense_split(split: SplitArg, n: usize) -> Result<BipartiteSplit, Error> {
    match split {
        SplitArg::One => BipartiteSplit::one_vs_rest(n),
        SplitArg::Half => BipartiteSplit::half(n),
        SplitArg::Mask(m) => BipartiteSplit::new(n, m),
    }
}

fn negativity_row(
    a: &NegativityArgs,
    n: u64,
    alpha: f64,
    x: f64,
) -> Result<NegativityRow, CliError> {
    let mut row = NegativityRow {
        n,
        alpha,
        log10_inv_alpha: x,
        value: None,
        path: "",
        flag: "",
    };
    if a.split == SplitArg::Half && n % 2 == 1 {
        row.flag = "odd_n_skipped";
        return Ok(row);
    }
    let analytic = a.circuit == CircuitArg::Ch && a.split == SplitArg::One;
    let use_dense = match a.path {
        PathArg::Auto => !analytic,
        PathArg::Analytic if !analytic => {
            return Err(CliError::Usage(
                "the analytic path needs --circuit ch --split one".into(),
            ))
        }
        PathArg::Analytic => false,
        PathArg::Dense => true,
    };
    if use_dense {
        if n > DENSE_CAP as u64 {
            return Err(Error::Capacity {
                n: n as usize,
                cap: DENSE_CAP,
            }
            .into());
        }
        let nn = n as usize;
        let th = dense::thermal_density(&ThermalSpec::new(nn, alpha)?)?;
        let rho = dense::apply_circuit(&th, &circuit(a.circuit, nn))?;
        row.value = Some(dense::negativity(&rho, &dense_split(a.split, nn)?)?);
        row.path = "dense";
    } else {
        row.value = Some(negativity_one_split(n, alpha)?);
        row.path = "analytic";
    }
    Ok(row)
}

fn negativity(a: &NegativityArgs, flags: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ns = a.n.values().map_err(CliError::Usage)?;
    let grid = alpha_grid(a)?;
    let mut rows = Vec::with_capacity(ns.len() * grid.len());
    for &n in &ns {
        let dense_heavy =
            n > DENSE_PARALLEL_MAX_N && !(a.circuit == CircuitArg::Ch && a.split == SplitArg::One);
        if dense_heavy {
            for &(alpha, x) in &grid {
                rows.push(negativity_row(a, n, alpha, x)?);
            }
        } else {
            let chunk: Vec<NegativityRow> = grid
                .par_iter()
                .map(|&(alpha, x)| negativity_row(a, n, alpha, x))
                .collect::<Result<_, _>>()?;
            rows.extend(chunk);
        }
    }
    with_output(a.output.out.as_deref(), stdout, |w| {
        let extra = vec![
            format!("circuit: {}", a.circuit.as_str()),
            format!("split: {}", a.split),
        ];
        header(w, "negativity", flags, "none", &extra)?;
        writeln!(
            w,
            "N,alpha,log10_inv_alpha,negativity,log_negativity,path,flag"
        )?;
        for r in &rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.n,
                r.alpha,
                r.log10_inv_alpha,
                opt(r.value),
                opt(r.value.map(log_negativity_display)),
                r.path,
                r.flag
            )?;
        }
        Ok(())
    })
}

fn parse_curves(ids: &[String]) -> Result<Vec<BoundCurve>, CliError> {
    if ids.is_empty() {
        return Ok(BoundCurve::ALL.to_vec());
    }
    ids.iter()
        .map(|s| s.trim().parse::<BoundCurve>().map_err(CliError::from))
        .collect()
}

fn bounds_table(a: &BoundsArgs, flags: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let curves = parse_curves(&a.curves)?;
    let ns = a.n.values().map_err(CliError::Usage)?;
    let mode: EpsilonMode = a.mode.into();
    let cells: Vec<(u64, BoundCurve)> = ns
        .iter()
        .flat_map(|&n| curves.iter().map(move |&c| (n, c)))
        .filter(|&(n, c)| !(c == BoundCurve::UchHalfSplit && n % 2 == 1))
        .collect();
    let rows: Vec<(u64, BoundCurve, Option<f64>)> = cells
        .par_iter()
        .map(|&(n, c)| match bounds::threshold_alpha(c, n, mode) {
            Ok(alpha) => Ok((n, c, Some(alpha))),
            Err(Error::NoSignChange { .. }) => Ok((n, c, None)),
            Err(e) => Err(e),
        })
        .collect::<Result<_, _>>()?;
    let conjecture: Vec<String> = rows
        .iter()
        .filter(|(n, c, _)| c.conjecture_dependent(*n))
        .map(|(n, c, _)| format!("{c}@N={n}"))
        .collect();
    let conjecture = if conjecture.is_empty() {
        "none".to_string()
    } else {
        conjecture.join(" ")
    };
    with_output(a.output.out.as_deref(), stdout, |w| {
        let extra = vec![
            format!("epsilon_mode: {}", mode.as_str()),
            "boundary_alpha is empty where no sign change exists in the search range".to_string(),
        ];
        header(w, "bounds", flags, &conjecture, &extra)?;
        writeln!(w, "N,curve_id,boundary_alpha,direction")?;
        for (n, c, alpha) in &rows {
            writeln!(w, "{n},{c},{},{}", opt(*alpha), c.direction().as_str())?;
        }
        Ok(())
    })
}

/// Curve id for effective-pure distillability in `threshold`.
pub const EFFPURE_DIST: &str = "effpure_dist";

fn threshold(a: &ThresholdArgs, flags: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_alpha(a.alpha)?;
    // (mode, n_star, predicate_at_n_star, predicate_at_prev, conjecture_dependent)
    let mut rows: Vec<(EpsilonMode, u64, bool, Option<bool>, bool)> = Vec::new();
    let curve_id = a.curve.as_str();
    if curve_id == EFFPURE_DIST {
        let modes = match a.mode {
            Some(m) => vec![m.into()],
            None => vec![EpsilonMode::Exact, EpsilonMode::Approximate],
        };
        for mode in modes {
            let n = bounds::effpure_distillable_threshold(a.alpha, mode)?;
            rows.push((mode, n, true, (n > 2).then_some(false), false));
        }
    } else {
        let curve: BoundCurve = curve_id.parse()?;
        let mode = a.mode.map(EpsilonMode::from).unwrap_or(EpsilonMode::Exact);
        let t = bounds::threshold_n(curve, a.alpha, mode)?;
        rows.push((
            mode,
            t.n_star,
            t.predicate_at_n_star,
            Some(t.predicate_at_prev),
            curve.conjecture_dependent(t.n_star),
        ));
    }
    let conjecture = if rows.iter().any(|r| r.4) {
        curve_id.to_string()
    } else {
        "none".to_string()
    };
    with_output(a.output.out.as_deref(), stdout, |w| {
        let extra = match curve_id.parse::<BoundCurve>() {
            Ok(c) if c.direction() == Direction::SatisfiedBelow => {
                vec!["n_star is the first N where the curve fails; the largest satisfying N is n_star - 1".to_string()]
            }
            _ => vec!["n_star is the first N where the curve holds".to_string()],
        };
        header(w, "threshold", flags, &conjecture, &extra)?;
        writeln!(
            w,
            "curve_id,alpha,mode,n_star,predicate_at_n_star,predicate_at_prev,conjecture_dependent"
        )?;
        for (mode, n, at, prev, conj) in &rows {
            let prev = prev.map(|p| p.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{curve_id},{},{},{n},{at},{prev},{conj}",
                a.alpha,
                mode.as_str()
            )?;
        }
        Ok(())
    })
}

fn hex(mask: u64) -> String {
    format!("{mask:x}")
}

fn classify(a: &ClassifyArgs, flags: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_alpha(a.alpha)?;
    if a.n < 2 {
        return Err(CliError::Usage(format!(
            "--n must be at least 2, got {}",
            a.n
        )));
    }
    if a.all_splits && a.n > DENSE_CAP as u64 {
        return Err(Error::Capacity {
            n: a.n as usize,
            cap: DENSE_CAP,
        }
        .into());
    }
    let n = a.n as usize;
    let spec = ThermalSpec::new(n, a.alpha)?;
    let rho_n = ephi_average(&bell_eigenvalues(&spec, &circuit(a.circuit, n))?);
    let ex = split_extremes(&rho_n);
    let mut summary = vec![
        format!("circuit: {}", a.circuit.as_str()),
        format!("delta: {}", rho_n.delta()),
        format!("ln_delta: {}", rho_n.ln_delta()),
        format!("min_ln_lambda: {} (weight {})", ex.ln_min, ex.argmin),
        format!("max_ln_lambda: {} (weight {})", ex.ln_max, ex.argmax),
        format!("fully_separable: {}", fully_separable(&rho_n)),
        format!("fully_distillable: {}", fully_distillable(&rho_n)),
    ];
    if a.circuit == CircuitArg::Chfan {
        summary.push(format!(
            "fullsep_variant: {}",
            FanSeparabilityVariant::for_n(a.n).as_str()
        ));
    }
    let (columns, rows) = if a.all_splits {
        all_split_rows(&rho_n)?
    } else if let Some(split) = a.split {
        single_split_rows(&rho_n, split)?
    } else {
        let rows = (1..n)
            .map(|w| {
                let mask = if n <= 63 {
                    hex((1u64 << w) - 1)
                } else {
                    String::new()
                };
                let verdict = split_ppt_by_weight(&rho_n, w)?;
                let ln_l = weight_ln_lambda(&rho_n, w);
                Ok(format!("{w},{mask},{ln_l},{}", verdict.as_str()))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        ("weight,split_mask,ln_lambda_k,verdict".to_string(), rows)
    };
    with_output(a.output.out.as_deref(), stdout, |w| {
        header(w, "classify", flags, "none", &summary)?;
        writeln!(w, "{columns}")?;
        for r in &rows {
            writeln!(w, "{r}")?;
        }
        Ok(())
    })
}

fn weight_ln_lambda(state: &DurCiracState, w: usize) -> f64 {
    match state.table() {
        LambdaTable::ByWeight(v) => v[w],
        LambdaTable::Dense(_) => unreachable!("closed-form states are stored per weight"),
    }
}

fn single_split_rows(
    state: &DurCiracState,
    split: SplitArg,
) -> Result<(String, Vec<String>), CliError> {
    let n = state.n_qubits();
    let columns = "split,weight,ln_lambda_k,verdict,canonicalized".to_string();
    let row = match split {
        SplitArg::One => {
            let v = split_ppt_by_weight(state, n - 1)?;
            format!(
                "one,{},{},{},false",
                n - 1,
                weight_ln_lambda(state, n - 1),
                v.as_str()
            )
        }
        SplitArg::Half => {
            if !n.is_multiple_of(2) {
                return Err(CliError::Usage(format!(
                    "--split half needs even N, got {n}"
                )));
            }
            let v = split_ppt_by_weight(state, n / 2)?;
            format!(
                "half,{},{},{},false",
                n / 2,
                weight_ln_lambda(state, n / 2),
                v.as_str()
            )
        }
        SplitArg::Mask(m) => {
            if n > 63 {
                return Err(Error::Capacity { n, cap: 63 }.into());
            }
            let s = BipartiteSplit::new(n, m)?;
            let d = split_ppt(state, &s)?;
            format!(
                "mask:{},{},{},{},{}",
                hex(m),
                d.mask.count_ones(),
                state.ln_lambda(d.mask),
                d.verdict.as_str(),
                d.canonicalized
            )
        }
    };
    Ok((columns, vec![row]))
}

fn all_split_rows(state: &DurCiracState) -> Result<(String, Vec<String>), CliError> {
    let n = state.n_qubits();
    let rho = state.to_dense()?;
    let splits = BipartiteSplit::all_canonical(n)?;
    let rows = splits
        .par_iter()
        .map(|s| {
            let d = split_ppt(state, s)?;
            let min = dense::partial_transpose_spectrum(&rho, s)?[0];
            let dense_npt = dense::is_npt(min);
            let agrees = (d.verdict == PptVerdict::Npt) == dense_npt || min.abs() <= PPT_TOLERANCE;
            Ok(format!(
                "{},{},{},{},{min},{agrees}",
                hex(s.mask()),
                s.hamming_weight(),
                state.ln_lambda(s.mask()),
                d.verdict.as_str()
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((
        "split_mask,weight,ln_lambda_k,verdict,dense_min_eig,dense_agrees".to_string(),
        rows,
    ))
}

fn search(a: &SearchArgs, flags: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_alpha(a.alpha)?;
    if a.n < 2 {
        return Err(CliError::Usage(format!(
            "--n must be at least 2, got {}",
            a.n
        )));
    }
    let spec = ThermalSpec::new(a.n as usize, a.alpha)?;
    let mut generator = BellPermutationGenerator::new(&spec, a.seed)?;
    let hit = majorization::search_candidate(&spec, &mut generator, a.budget)?;
    with_output(a.output.out.as_deref(), stdout, |w| {
        let extra = vec!["generator: bell-permutation".to_string()];
        header(w, "search", flags, "none", &extra)?;
        writeln!(w, "found,index,split_mask,delta,min_prefix_margin")?;
        match &hit {
            Some(h) => {
                let min_margin = h
                    .certificate
                    .prefix_margins
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min);
                writeln!(
                    w,
                    "true,{},{},{},{min_margin}",
                    h.index,
                    hex(h.certificate.split_mask),
                    h.candidate.state.delta()
                )?;
            }
            None => writeln!(w, "false,,,,")?,
        }
        Ok(())
    })
}

fn feasible(a: &FeasibleArgs, flags: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_alpha(a.alpha)?;
    let (n, spectrum) = majorization::read_spectrum_csv(BufReader::new(File::open(&a.spectrum)?))?;
    let spec = ThermalSpec::new(n, a.alpha)?;
    let verdict = majorization::spectrum_feasible(&spectrum, &spec)?;
    with_output(a.output.out.as_deref(), stdout, |w| {
        header(w, "feasible", flags, "none", &[])?;
        writeln!(
            w,
            "N,alpha,thermal_entropy_bits,candidate_entropy_bits,verdict"
        )?;
        writeln!(
            w,
            "{n},{},{},{},{}",
            a.alpha,
            majorization::thermal_entropy(&spec),
            majorization::von_neumann_entropy(&spectrum),
            verdict.as_str()
        )?;
        Ok(())
    })
}
