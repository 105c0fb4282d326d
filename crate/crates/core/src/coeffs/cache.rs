//! Line-oriented cache file: one header line, then one record per index
//! `m delta r_m p_{m,0} .. p_{m,r_m}` with every `p` written as `n/d` in
//! lowest terms.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{first_violation, CoeffCache, CoeffError, CoeffTable};
use crate::exact::{format_rational, parse_rational};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "# dp3-coeffs";
const CONVENTION: &str = "y(x) = -(x/2)(1 + sum_{m>=1} c_m x^m)";

fn header() -> String {
    format!("{MAGIC} format={FORMAT_VERSION} convention=\"{CONVENTION}\"\n")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CoeffError + '_ {
    move |source| CoeffError::Io { path: path.to_path_buf(), source }
}

fn record(cache: &CoeffCache, m: usize) -> Result<String, CoeffError> {
    let t = CoeffTable::from_poly(m, &cache.poly(m)?)?;
    let mut line = format!("{} {} {}", t.m, t.delta, t.r_m);
    for (_, p) in &t.entries {
        line.push(' ');
        line.push_str(&format_rational(p));
    }
    line.push('\n');
    Ok(line)
}

/// Writes the whole cache through a temporary sibling and renames it into
/// place, so a crash never leaves a half-written file at `path`.
pub fn save_cache(cache: &CoeffCache, path: &Path) -> Result<(), CoeffError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let tmp = tmp_path(path);
    {
        let file = File::create(&tmp).map_err(io_err(&tmp))?;
        let mut w = BufWriter::new(file);
        w.write_all(header().as_bytes()).map_err(io_err(&tmp))?;
        for m in 0..=cache.max_m() {
            w.write_all(record(cache, m)?.as_bytes()).map_err(io_err(&tmp))?;
        }
        let file = w.into_inner().map_err(|e| io_err(&tmp)(e.into_error()))?;
        file.sync_all().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Parses and validates a cache file. Every record is checked for layout,
/// canonical form and sequential indices; the recurrence is then checked on
/// all entries at once by modular fingerprinting.
pub fn load_cache(path: &Path) -> Result<CoeffCache, CoeffError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let parse_err = |line: usize, reason: String| CoeffError::Parse { path: path.to_path_buf(), line, reason };
    let mut lines = text.split_inclusive('\n').enumerate();
    let (_, head) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let head = head.trim_end();
    let rest = head
        .strip_prefix(MAGIC)
        .ok_or_else(|| CoeffError::UnsupportedFormat(format!("missing `{MAGIC}` header")))?;
    let version = rest
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("format="))
        .ok_or_else(|| CoeffError::UnsupportedFormat("header lacks format=".into()))?;
    if version != FORMAT_VERSION.to_string() {
        return Err(CoeffError::UnsupportedFormat(format!("format={version}, expected {FORMAT_VERSION}")));
    }

    let mut polys = Vec::new();
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let complete = raw.ends_with('\n');
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !complete {
            log::warn!("{}:{lineno}: dropping unterminated final record", path.display());
            break;
        }
        polys.push(parse_record(line, polys.len()).map_err(|reason| parse_err(lineno, reason))?);
    }
    let cache = CoeffCache::from_polys(polys)?;
    if let Some(m) = first_violation(&cache)? {
        return Err(CoeffError::Corrupt { m, reason: "entry does not satisfy the recurrence".into() });
    }
    Ok(cache)
}

fn parse_record(line: &str, expected_m: usize) -> Result<crate::exact::RationalPoly, String> {
    let mut toks = line.split_whitespace();
    let mut int = |what: &str| -> Result<usize, String> {
        toks.next()
            .ok_or_else(|| format!("missing {what}"))?
            .parse::<usize>()
            .map_err(|e| format!("bad {what}: {e}"))
    };
    let m = int("m")?;
    let delta = int("delta")?;
    let r_m = int("r_m")?;
    if m != expected_m {
        return Err(format!("expected record for m = {expected_m}, found m = {m}"));
    }
    if delta != CoeffTable::delta_for(m) || r_m != CoeffTable::r_for(m) {
        return Err(format!("layout ({delta}, {r_m}) does not match m = {m}"));
    }
    let mut entries = Vec::with_capacity(r_m + 1);
    for (n, tok) in toks.enumerate() {
        let p = parse_rational(tok).map_err(|e| e.to_string())?;
        if format_rational(&p) != tok {
            return Err(format!("p_{{{m},{n}}} = {tok} is not in lowest terms"));
        }
        entries.push((n, p));
    }
    if entries.len() != r_m + 1 {
        return Err(format!("expected {} coefficients, found {}", r_m + 1, entries.len()));
    }
    Ok(CoeffTable { m, delta, r_m, entries }.to_poly())
}

/// Appends records to a cache file as the engine produces them, so an
/// interrupted run resumes from the last completed index.
pub struct CacheWriter {
    path: PathBuf,
    file: File,
}

impl CacheWriter {
    /// Rewrites `path` from `cache` and opens it for appending.
    pub fn create(path: &Path, cache: &CoeffCache) -> Result<Self, CoeffError> {
        save_cache(cache, path)?;
        let file = OpenOptions::new().append(true).open(path).map_err(io_err(path))?;
        Ok(Self { path: path.to_path_buf(), file })
    }

    pub fn append(&mut self, cache: &CoeffCache, m: usize) -> Result<(), CoeffError> {
        let line = record(cache, m)?;
        self.file.write_all(line.as_bytes()).map_err(io_err(&self.path))?;
        self.file.flush().map_err(io_err(&self.path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::compute_cm;
    use crate::par::ExecMode;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let cache = compute_cm(30, CoeffCache::new(), ExecMode::Parallel).unwrap();
        save_cache(&cache, &path).unwrap();
        let first = fs::read(&path).unwrap();
        let loaded = load_cache(&path).unwrap();
        for m in 0..=30 {
            assert_eq!(loaded.poly(m).unwrap(), cache.poly(m).unwrap());
        }
        save_cache(&loaded, &path).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
        let text = String::from_utf8(first).unwrap();
        assert!(text.lines().nth(3).unwrap() == "2 0 0 4/3");
        assert!(text.lines().nth(5).unwrap() == "4 1 1 4/9 16/15");
    }

    #[test]
    fn incremental_writer_matches_full_save() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.txt");
        let b = dir.path().join("b.txt");
        let mut cache = compute_cm(5, CoeffCache::new(), ExecMode::Sequential).unwrap();
        let mut w = CacheWriter::create(&a, &cache).unwrap();
        cache.extend_with(12, ExecMode::Sequential, |c, r| w.append(c, r.m).unwrap());
        save_cache(&cache, &b).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }

    #[test]
    fn corruption_is_reported_with_index() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let cache = compute_cm(12, CoeffCache::new(), ExecMode::Sequential).unwrap();
        save_cache(&cache, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap().replace("7 1 1 4/27 1336/945", "7 1 1 4/27 1336/943");
        fs::write(&path, text).unwrap();
        let err = load_cache(&path).unwrap_err();
        assert_eq!(err.offending_index(), Some(7), "{err}");
    }

    #[test]
    fn rejects_other_versions_and_bad_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        fs::write(&path, "# dp3-coeffs format=2\n0 0 0 1/1\n").unwrap();
        assert!(matches!(load_cache(&path), Err(CoeffError::UnsupportedFormat(_))));
        fs::write(&path, format!("{}0 0 0 1/1\n1 1 0 1/1\n2 0 1 4/3\n", header())).unwrap();
        assert!(matches!(load_cache(&path), Err(CoeffError::Parse { line: 4, .. })));
        fs::write(&path, format!("{}0 0 0 1/1\n1 1 0 1/1\n2 0 0 8/6\n", header())).unwrap();
        assert!(matches!(load_cache(&path), Err(CoeffError::Parse { .. })));
    }

    #[test]
    fn truncated_tail_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let cache = compute_cm(6, CoeffCache::new(), ExecMode::Sequential).unwrap();
        save_cache(&cache, &path).unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("7 1 1 4/2");
        fs::write(&path, text).unwrap();
        assert_eq!(load_cache(&path).unwrap().max_m(), 6);
    }
}
