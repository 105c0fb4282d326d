use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{integrate, IntegrateOptions, NumError, PoleKind, PoleMarker, Sample, SolutionParams, Trajectory};
use crate::par::{map_collect, ExecMode};

const HEADER: &str = "tau,re_u,im_u,re_du,im_du";

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> NumError + '_ {
    move |source| NumError::Io { path: path.display().to_string(), source }
}

fn kind_name(k: PoleKind) -> &'static str {
    match k {
        PoleKind::Blowup => "blowup",
        PoleKind::Zero => "zero",
    }
}

pub fn write_csv(traj: &Trajectory, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for s in &traj.samples {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", s.tau, s.u.re, s.u.im, s.du.re, s.du.im)?;
    }
    for p in &traj.poles {
        writeln!(out, "# pole near tau in [{:.16e}, {:.16e}] {}", p.lo, p.hi, kind_name(p.kind))?;
    }
    Ok(())
}

pub fn emit_csv(traj: &Trajectory, path: &Path) -> Result<(), NumError> {
    let mut f = BufWriter::new(fs::File::create(path).map_err(io_err(path))?);
    write_csv(traj, &mut f).and_then(|_| f.flush()).map_err(io_err(path))
}

/// Reads back the samples and pole markers of an emitted file.
pub fn read_csv(path: &Path) -> Result<(Vec<Sample>, Vec<PoleMarker>), NumError> {
    let f = fs::File::open(path).map_err(io_err(path))?;
    let perr = |line: usize, reason: String| NumError::Parse { path: path.display().to_string(), line, reason };
    let (mut samples, mut poles) = (Vec::new(), Vec::new());
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let n = i + 1;
        if n == 1 {
            if line != HEADER {
                return Err(perr(n, format!("expected header {HEADER:?}")));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("# pole near tau in [") {
            let (range, kind) = rest.split_once("] ").ok_or_else(|| perr(n, "malformed pole marker".into()))?;
            let (lo, hi) = range.split_once(", ").ok_or_else(|| perr(n, "malformed pole range".into()))?;
            let kind = match kind {
                "blowup" => PoleKind::Blowup,
                "zero" => PoleKind::Zero,
                other => return Err(perr(n, format!("unknown pole kind {other:?}"))),
            };
            let num = |s: &str| s.parse::<f64>().map_err(|e| perr(n, e.to_string()));
            poles.push(PoleMarker { lo: num(lo)?, hi: num(hi)?, kind });
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| perr(n, e.to_string()))?;
        if v.len() != 5 {
            return Err(perr(n, format!("expected 5 fields, found {}", v.len())));
        }
        samples.push(Sample { tau: v[0], u: Complex64::new(v[1], v[2]), du: Complex64::new(v[3], v[4]) });
    }
    Ok((samples, poles))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub params: SolutionParams,
    pub csv: Option<String>,
    pub sha256: Option<String>,
    pub samples: usize,
    pub poles: Vec<PoleMarker>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchManifest {
    pub options: IntegrateOptions,
    pub entries: Vec<BatchEntry>,
}

/// Integrates every parameter set independently, writes `traj_NNN.csv`
/// files and `manifest.json` into `dir`, and returns the manifest. A failed
/// integration is recorded in its entry rather than aborting the batch.
pub fn batch_integrate(
    params: &[SolutionParams],
    opts: &IntegrateOptions,
    dir: &Path,
    mode: ExecMode,
) -> Result<BatchManifest, NumError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let results = map_collect(mode, params.len(), |i| -> Result<BatchEntry, NumError> {
        let p = params[i];
        match integrate(&p, opts) {
            Ok(traj) => {
                let mut buf = Vec::new();
                write_csv(&traj, &mut buf).expect("writing to memory");
                let name = format!("traj_{i:03}.csv");
                let path = dir.join(&name);
                fs::write(&path, &buf).map_err(io_err(&path))?;
                Ok(BatchEntry {
                    params: p,
                    csv: Some(name),
                    sha256: Some(sha256_hex(&buf)),
                    samples: traj.samples.len(),
                    poles: traj.poles,
                    error: None,
                })
            }
            Err(e) => Ok(BatchEntry { params: p, csv: None, sha256: None, samples: 0, poles: vec![], error: Some(e.to_string()) }),
        }
    });
    let manifest = BatchManifest { options: *opts, entries: results.into_iter().collect::<Result<_, _>>()? };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json).map_err(io_err(&path))?;
    Ok(manifest)
}
