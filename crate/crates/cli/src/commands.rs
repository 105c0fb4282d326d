use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context as _};
use num_complex::Complex64;
use serde_json::json;

use dp3_core::coeffs::{self, CacheWriter, CoeffCache, CoeffError};
use dp3_core::fence::{verify_fence, z_formula};
use dp3_core::genfun::{a_closed, a_series, check_column, verify_genfun_ode};
use dp3_core::monodromy::{self, backlund_map, monodromy_point, SearchRect};
use dp3_core::numeric::{self, IntegrateOptions, SolutionParams};
use dp3_core::par::ExecMode;

use crate::{Command, Outcome, SolveArgs};

pub struct Context {
    pub cache: PathBuf,
    pub mode: ExecMode,
}

/// A mathematical mismatch (corrupt cache entry, failed identity) as opposed
/// to an operational error.
#[derive(Debug)]
pub struct MathFailure(pub String);

impl std::fmt::Display for MathFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for MathFailure {}

/// Stretch range and the values the fence lists print for it.
const STRETCH: (usize, [i64; 8]) = (793, [4, 268, 6, 266, 5, 275, 6, 268]);
/// Wall time of the reference symbolic computation up to m = 800, in hours.
const REFERENCE_HOURS: f64 = 113.0;

fn coeff_failure(e: CoeffError) -> anyhow::Error {
    match e.offending_index() {
        Some(m) => MathFailure(format!("cache entry m = {m} is invalid: {e}")).into(),
        None => e.into(),
    }
}

fn load(ctx: &Context) -> anyhow::Result<CoeffCache> {
    if !ctx.cache.exists() {
        bail!("cache {} not found; run `dp3 coeffs --max-m N` first", ctx.cache.display());
    }
    coeffs::load_cache(&ctx.cache).map_err(coeff_failure)
}

fn load_or_new(ctx: &Context) -> anyhow::Result<CoeffCache> {
    if ctx.cache.exists() {
        load(ctx)
    } else {
        Ok(CoeffCache::new())
    }
}

/// Extends the cache file in place, appending each record as soon as it is
/// computed so an interrupted run resumes where it stopped.
fn extend(ctx: &Context, cache: &mut CoeffCache, max_m: usize, verbose: bool) -> anyhow::Result<()> {
    if cache.max_m() >= max_m {
        println!("cache hit: c_0..c_{} already stored in {}", cache.max_m(), ctx.cache.display());
        return Ok(());
    }
    if let Some(dir) = ctx.cache.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut writer = CacheWriter::create(&ctx.cache, cache)?;
    let mut failure: Option<CoeffError> = None;
    cache.extend_with(max_m, ctx.mode, |c, step| {
        if failure.is_none() {
            if let Err(e) = writer.append(c, step.m) {
                failure = Some(e);
            }
        }
        if verbose {
            println!(
                "m={} time={:.3}s digits={} products={}",
                step.m,
                step.elapsed.as_secs_f64(),
                step.max_digits,
                step.products
            );
        }
    });
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn writer_for(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn dispatch(ctx: &Context, cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Coeffs { max_m } => {
            let mut cache = load_or_new(ctx)?;
            extend(ctx, &mut cache, max_m as usize, true)?;
            Ok(Outcome::Pass)
        }
        Command::Dump { max_m, from } => {
            let cache = load(ctx)?;
            let hi = max_m.unwrap_or(cache.max_m()).min(cache.max_m());
            let mut out = io::stdout().lock();
            for m in from..=hi {
                writeln!(out, "c_{m} = {}", cache.poly(m)?)?;
            }
            Ok(Outcome::Pass)
        }
        Command::Verify { max_m, stretch } => verify(ctx, max_m, stretch),
        Command::Genfun { n, order, column, out } => genfun(ctx, n, order, column, &out),
        Command::Fence { from, max_m, out } => {
            let cache = load(ctx)?;
            let hi = max_m.unwrap_or(cache.max_m());
            if hi > cache.max_m() {
                bail!("cache holds c_m up to m = {}, asked for {hi}", cache.max_m());
            }
            let report = verify_fence(from..=hi, &cache, ctx.mode)?;
            let mut w = writer_for(&out)?;
            serde_json::to_writer_pretty(&mut w, &report)?;
            writeln!(w)?;
            for e in report.mismatched() {
                eprintln!("mismatch at m = {}: computed {}, predicted {} ({})", e.m, e.computed, e.predicted, e.rule);
            }
            Ok(if report.all_match() { Outcome::Pass } else { Outcome::Mismatch })
        }
        Command::Monodromy { c1, kappa, eps_b, out } => monodromy_cmd(c1, kappa, eps_b, &out),
        Command::Roots { which, strip, grid, out } => {
            let base = if strip { SearchRect::strip() } else { SearchRect::default() };
            let roots = monodromy::find_varrho_roots(which, SearchRect { grid: (grid, grid), ..base }, ctx.mode)?;
            let mut w = writer_for(&out)?;
            monodromy::write_roots_csv(&roots, &mut w)?;
            w.flush()?;
            Ok(Outcome::Pass)
        }
        Command::Solve { params, opts, out } => {
            let p = solution_params(params.c1, params.kappa, params.eps, params.b, params.eps_b)?;
            let traj = numeric::integrate(&p, &options(&opts))?;
            match &out {
                Some(path) => numeric::emit_csv(&traj, path)?,
                None => {
                    let mut w = io::stdout().lock();
                    numeric::write_csv(&traj, &mut w)?;
                }
            }
            for pole in &traj.poles {
                eprintln!("pole near tau in [{}, {}] ({:?}); trajectory stops there", pole.lo, pole.hi, pole.kind);
            }
            Ok(Outcome::Pass)
        }
        Command::Batch { c1s, kappa, eps, b, eps_b, opts, out } => {
            let params = c1s
                .iter()
                .map(|c1| solution_params(*c1, kappa, eps, b, eps_b))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let manifest = numeric::batch_integrate(&params, &options(&opts), &out, ctx.mode)?;
            let failed = manifest.entries.iter().filter(|e| e.error.is_some()).count();
            println!("{} trajectories written to {}, {failed} failed", manifest.entries.len(), out.display());
            if failed > 0 {
                bail!("{failed} integrations failed; see manifest.json");
            }
            Ok(Outcome::Pass)
        }
    }
}

fn options(a: &SolveArgs) -> IntegrateOptions {
    IntegrateOptions {
        tau0: a.tau0,
        tau_end: a.tau_end,
        tol: a.tol,
        seed_order: a.order,
        output_step: a.step,
        ..IntegrateOptions::default()
    }
}

/// Resolves `(eps, b)` from the sign flags, enforcing `eps * b > 0`.
pub fn solution_params(
    c1t: Complex64,
    kappa: i8,
    eps: Option<i8>,
    b: Option<f64>,
    eps_b: Option<f64>,
) -> anyhow::Result<SolutionParams> {
    let (eps, b) = match (eps, b, eps_b) {
        (_, Some(_), Some(_)) => bail!("give either --b or --eps-b, not both"),
        (e, Some(b), None) => (e.map_or(b.signum(), f64::from), b),
        (e, None, eb) => {
            let e = f64::from(e.unwrap_or(1));
            (e, e * eb.unwrap_or(0.5))
        }
    };
    let p = SolutionParams { kappa, eps, b, c1t };
    p.validate()?;
    Ok(p)
}

fn verify(ctx: &Context, max_m: Option<usize>, stretch: bool) -> anyhow::Result<Outcome> {
    let mut cache = load(ctx)?;
    if stretch {
        let (lo, _) = STRETCH;
        let hi = lo + 7;
        if cache.max_m() < hi {
            // Per-step cost grows like m^5; 15 s to reach m = 300.
            let est = 15.0 * ((hi as f64 / 300.0).powi(6) - (cache.max_m() as f64 / 300.0).powi(6));
            println!("stretch: extending c_m from m = {} to {hi}; rough estimate {:.0} min", cache.max_m(), est / 60.0);
        }
        let start = Instant::now();
        extend(ctx, &mut cache, hi, false)?;
        let secs = start.elapsed().as_secs_f64();
        if secs > 0.0 {
            let total: f64 = cache.timings().iter().map(|t| t.elapsed.as_secs_f64()).sum();
            println!(
                "stretch: cache extension took {secs:.0} s in this run ({total:.0} s of recorded steps); reference run {REFERENCE_HOURS} h"
            );
        }
    }
    let hi = max_m.unwrap_or(cache.max_m()).min(cache.max_m());
    let mut ok = true;
    let mut report = |name: &str, pass: bool, detail: String| {
        println!("{}: {name} {detail}", verdict(pass));
        ok &= pass;
    };

    let parity = (0..=hi).find(|&m| !coeffs::check_parity(m, &cache).unwrap_or(false));
    report("parity", parity.is_none(), format!("m <= {hi}{}", parity.map_or(String::new(), |m| format!(", first failure m = {m}"))));
    let degree = (0..=hi).find(|&m| !coeffs::check_degree(m, &cache).unwrap_or(false));
    report("degree", degree.is_none(), format!("m <= {hi}{}", degree.map_or(String::new(), |m| format!(", first failure m = {m}"))));
    for j in 0..=1 {
        let col = check_column(j, &cache, hi + 1)?;
        let bad = col.mismatches().first().map(|r| r.m);
        report(
            &format!("column {j}"),
            col.passed(),
            format!("m <= {hi}{}", bad.map_or(String::new(), |m| format!(", first mismatch m = {m}"))),
        );
    }
    if hi >= 2 {
        let fence = verify_fence(2..=hi, &cache, ctx.mode)?;
        let first = fence.mismatched().next().map(|e| e.m);
        report(
            "fence",
            fence.all_match(),
            format!(
                "2 <= m <= {hi}, {} mismatches{}; impure contents at m = {:?}",
                fence.mismatches,
                first.map_or(String::new(), |m| format!(", first m = {m}")),
                fence.impure_contents()
            ),
        );
    }
    if stretch {
        let (lo, printed) = STRETCH;
        let fence = verify_fence(lo..=lo + 7, &cache, ctx.mode)?;
        let computed: Vec<i64> = fence.entries.iter().map(|e| e.computed).collect();
        let formula: Vec<i64> = (lo..=lo + 7).map(|m| z_formula(m as u64).map(|p| p.z as i64)).collect::<Result<_, _>>()?;
        report(
            "stretch fence",
            computed == printed && formula == printed,
            format!("m = {lo}..{}: computed {computed:?}, formula {formula:?}, printed {printed:?}", lo + 7),
        );
    }
    Ok(if ok { Outcome::Pass } else { Outcome::Mismatch })
}

fn genfun(ctx: &Context, n: usize, order: usize, column: Option<usize>, out: &Option<PathBuf>) -> anyhow::Result<Outcome> {
    if let Some(j) = column {
        let cache = load(ctx)?;
        let report = check_column(j, &cache, cache.max_m() + 1)?;
        let mut w = writer_for(out)?;
        report.write_csv(&mut w)?;
        w.flush()?;
        for (i, e) in &report.stray_terms {
            eprintln!("A_{i} has a term z^{e} outside its residue class");
        }
        return Ok(if report.passed() { Outcome::Pass } else { Outcome::Mismatch });
    }
    let mut w = writer_for(out)?;
    let closed = a_closed(n)?;
    writeln!(w, "A_{n}(z) = {closed}")?;
    writeln!(w, "A_{n}(z) = {}", a_series(n, order)?)?;
    if n <= 4 {
        let res = verify_genfun_ode(n, order.max(6))?;
        writeln!(w, "{}: hierarchy equation {n} residual {res}", verdict(res.is_zero()))?;
        if !res.is_zero() {
            return Ok(Outcome::Mismatch);
        }
    }
    Ok(Outcome::Pass)
}

fn monodromy_cmd(c1: Complex64, kappa: i8, eps_b: f64, out: &Option<PathBuf>) -> anyhow::Result<Outcome> {
    let pt = monodromy_point(c1, eps_b, kappa)?;
    let res = pt.residuals();
    let nu = pt.nu_plus_one();
    let cx = |z: Complex64| json!([z.re, z.im]);
    let mut doc = json!({
        "c1": cx(c1),
        "kappa": kappa,
        "eps_b": eps_b,
        "point": pt,
        "tilde": {
            "g1": cx(pt.g1t()), "g2": cx(pt.g2t()), "g3": cx(pt.g3t()), "g4": cx(pt.g4t()),
            "s": cx(pt.st()), "f1": cx(pt.f1t()), "f2": cx(pt.f2t()),
        },
        "residuals": res.0,
        "nu_plus_one": nu.as_ref().ok().map(|v| cx(v.value)),
        "nu_plus_one_raw": nu.as_ref().ok().map(|v| cx(v.raw)),
    });
    if let Err(e) = &nu {
        doc["nu_plus_one_error"] = json!(e.to_string());
    }
    let mut worst = res.max();
    if kappa == 1 {
        let b = backlund_map(&pt)?;
        worst = worst.max(b.residuals().max());
        doc["backlund"] = json!({ "point": b, "residuals": b.residuals().0 });
    }
    let mut w = writer_for(out)?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    if worst > 1e-11 {
        return Err(MathFailure(format!("manifold residual {worst:e} exceeds 1e-11")).into());
    }
    Ok(Outcome::Pass)
}
