//! Chunked, resumable gamma scans.
//!
//! Tasks are the `(k, q)` pairs in ascending order. Each chunk is computed
//! on a worker pool, then appended to the output by this single writer, so
//! the bytes never depend on the worker count. After every chunk the output
//! is synced and a checkpoint recording the byte offset and a hash of the
//! prefix is replaced atomically.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Read, Seek, SeekFrom, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use waring_core::arith::prime_powers_up_to;
use waring_core::gamma::default_uncoverable_bound;
use waring_core::{gamma, GammaResult, WaringError};

pub const DEFAULT_CHUNK_SIZE: usize = 64;

/// Largest explicit or automatic bound a scan accepts.
pub const SCAN_BOUND_CAP: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `8k^4`, the range where uncoverable fields can occur.
    Auto,
    Fixed(u64),
}

impl Bound {
    pub fn resolve(self, k: u64) -> u64 {
        match self {
            Bound::Auto => default_uncoverable_bound(k),
            Bound::Fixed(n) => n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct ScanJob {
    pub ks: RangeInclusive<u64>,
    pub bound: Bound,
    /// Keep only covered fields with `γ` in this range.
    pub filter: Option<RangeInclusive<u32>>,
    pub format: Format,
    /// `None` writes to the supplied writer with no checkpointing.
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    pub chunk_size: usize,
    /// Stop (as if killed) after this many chunks in this invocation.
    pub stop_after_chunks: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    /// Last completed task.
    pub k: u64,
    pub last_q: u64,
    /// SHA-256 of the output bytes `[0, byte_offset)`.
    pub rows_hash: String,
    pub byte_offset: u64,
    pub rows_written: u64,
    pub task_index: u64,
    pub job_signature: String,
    pub complete: bool,
}

#[derive(Debug)]
pub enum ScanError {
    Domain(WaringError),
    Io(io::Error),
}

impl From<WaringError> for ScanError {
    fn from(e: WaringError) -> Self {
        ScanError::Domain(e)
    }
}

impl From<io::Error> for ScanError {
    fn from(e: io::Error) -> Self {
        ScanError::Io(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSummary {
    pub tasks: u64,
    pub rows_written: u64,
    pub complete: bool,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    k: u64,
    q: u64,
    coverable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<u32>,
    closure_sizes: &'a [u64],
}

impl ScanJob {
    fn tasks(&self) -> Result<Vec<(u64, u64)>, WaringError> {
        let mut out = Vec::new();
        for k in self.ks.clone() {
            let bound = self.bound.resolve(k);
            if bound > SCAN_BOUND_CAP {
                return Err(WaringError::CapExceeded {
                    what: "scan bound",
                    size: bound as u128,
                    cap: SCAN_BOUND_CAP,
                });
            }
            out.extend(prime_powers_up_to(bound).into_iter().map(|(q, _, _)| (k, q)));
        }
        Ok(out)
    }

    /// Identifies everything that shapes the output bytes.
    pub fn signature(&self) -> String {
        let filter = match &self.filter {
            Some(r) => format!("{}..{}", r.start(), r.end()),
            None => "none".into(),
        };
        let bound = match self.bound {
            Bound::Auto => "auto".to_string(),
            Bound::Fixed(n) => n.to_string(),
        };
        let text = format!(
            "k={}..{};bound={bound};filter={filter};format={:?}",
            self.ks.start(),
            self.ks.end(),
            self.format
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn keep(&self, r: &GammaResult) -> bool {
        match &self.filter {
            None => true,
            Some(range) => r.gamma().is_some_and(|g| range.contains(&g)),
        }
    }

    fn header(&self) -> &'static str {
        match self.format {
            Format::Csv => "k,q,coverable,gamma\n",
            Format::Json => "[",
        }
    }

    fn footer(&self) -> &'static str {
        match self.format {
            Format::Csv => "",
            Format::Json => "\n]\n",
        }
    }

    fn render(&self, r: &GammaResult, first: bool, buf: &mut String) {
        match self.format {
            Format::Csv => {
                let g = r.gamma().map(|g| g.to_string()).unwrap_or_default();
                buf.push_str(&format!("{},{},{},{}\n", r.k, r.q, r.is_coverable(), g));
            }
            Format::Json => {
                buf.push_str(if first { "\n" } else { ",\n" });
                let row = JsonRow {
                    k: r.k,
                    q: r.q,
                    coverable: r.is_coverable(),
                    gamma: r.gamma(),
                    closure_sizes: &r.closure_sizes,
                };
                buf.push_str(&serde_json::to_string(&row).expect("row serializes"));
            }
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, ScanError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.max(1))
            .build()
            .map_err(|e| ScanError::Io(io::Error::other(e.to_string())))
    }

    fn compute(pool: &rayon::ThreadPool, chunk: &[(u64, u64)]) -> Result<Vec<GammaResult>, WaringError> {
        pool.install(|| chunk.par_iter().map(|&(k, q)| gamma(k, q)).collect())
    }
}

/// Runs `job`. Without an output path the table is written to `sink`.
pub fn run_scan(job: &ScanJob, sink: &mut dyn Write) -> Result<ScanSummary, ScanError> {
    let tasks = job.tasks()?;
    let chunk_size = job.chunk_size.max(1);
    let pool = job.pool()?;
    let Some(path) = &job.out else {
        let mut buf = String::from(job.header());
        let mut rows = 0u64;
        for chunk in tasks.chunks(chunk_size) {
            for r in ScanJob::compute(&pool, chunk)? {
                if job.keep(&r) {
                    job.render(&r, rows == 0, &mut buf);
                    rows += 1;
                }
            }
        }
        buf.push_str(job.footer());
        sink.write_all(buf.as_bytes())?;
        return Ok(ScanSummary {
            tasks: tasks.len() as u64,
            rows_written: rows,
            complete: true,
        });
    };

    let signature = job.signature();
    let resumed = match &job.checkpoint {
        Some(cp) if cp.exists() => Some(load_checkpoint(cp, &signature)?),
        _ => None,
    };
    if let Some(cp) = &resumed {
        if cp.complete {
            return Ok(ScanSummary {
                tasks: tasks.len() as u64,
                rows_written: cp.rows_written,
                complete: true,
            });
        }
    }

    let mut file = OpenOptions::new().read(true).write(true).create(true).truncate(false).open(path)?;
    let (mut hasher, mut offset, mut rows, mut next_task) = match &resumed {
        Some(cp) => {
            let hasher = hash_prefix(&mut file, cp.byte_offset)?;
            if hex::encode(hasher.clone().finalize()) != cp.rows_hash {
                return Err(ScanError::Domain(WaringError::InvalidInput(format!(
                    "{} does not match its checkpoint",
                    path.display()
                ))));
            }
            file.set_len(cp.byte_offset)?;
            (hasher, cp.byte_offset, cp.rows_written, cp.task_index as usize)
        }
        None => {
            file.set_len(0)?;
            let h = job.header();
            file.write_all(h.as_bytes())?;
            let mut hasher = Sha256::new();
            hasher.update(h.as_bytes());
            (hasher, h.len() as u64, 0, 0)
        }
    };
    file.seek(SeekFrom::Start(offset))?;

    let mut chunks_done = 0usize;
    while next_task < tasks.len() {
        if job.stop_after_chunks.is_some_and(|n| chunks_done >= n) {
            file.sync_all()?;
            return Ok(ScanSummary {
                tasks: tasks.len() as u64,
                rows_written: rows,
                complete: false,
            });
        }
        let end = (next_task + chunk_size).min(tasks.len());
        let chunk = &tasks[next_task..end];
        let mut buf = String::new();
        for r in ScanJob::compute(&pool, chunk)? {
            if job.keep(&r) {
                job.render(&r, rows == 0, &mut buf);
                rows += 1;
            }
        }
        file.write_all(buf.as_bytes())?;
        file.sync_data()?;
        hasher.update(buf.as_bytes());
        offset += buf.len() as u64;
        next_task = end;
        chunks_done += 1;
        let (k, last_q) = tasks[end - 1];
        if let Some(cp_path) = &job.checkpoint {
            write_checkpoint(
                cp_path,
                &Checkpoint {
                    k,
                    last_q,
                    rows_hash: hex::encode(hasher.clone().finalize()),
                    byte_offset: offset,
                    rows_written: rows,
                    task_index: next_task as u64,
                    job_signature: signature.clone(),
                    complete: false,
                },
            )?;
        }
    }

    let footer = job.footer();
    file.write_all(footer.as_bytes())?;
    file.sync_all()?;
    hasher.update(footer.as_bytes());
    offset += footer.len() as u64;
    if let Some(cp_path) = &job.checkpoint {
        let (k, last_q) = tasks.last().copied().unwrap_or((*job.ks.end(), 0));
        write_checkpoint(
            cp_path,
            &Checkpoint {
                k,
                last_q,
                rows_hash: hex::encode(hasher.finalize()),
                byte_offset: offset,
                rows_written: rows,
                task_index: tasks.len() as u64,
                job_signature: signature,
                complete: true,
            },
        )?;
    }
    Ok(ScanSummary {
        tasks: tasks.len() as u64,
        rows_written: rows,
        complete: true,
    })
}

fn hash_prefix(file: &mut File, len: u64) -> Result<Sha256, ScanError> {
    let actual = file.metadata()?.len();
    if actual < len {
        return Err(ScanError::Domain(WaringError::InvalidInput(format!(
            "output is shorter ({actual} bytes) than the checkpoint offset {len}"
        ))));
    }
    file.seek(SeekFrom::Start(0))?;
    let mut hasher = Sha256::new();
    let mut remaining = len;
    let mut buf = vec![0u8; 1 << 16];
    while remaining > 0 {
        let want = remaining.min(buf.len() as u64) as usize;
        file.read_exact(&mut buf[..want])?;
        hasher.update(&buf[..want]);
        remaining -= want as u64;
    }
    Ok(hasher)
}

fn load_checkpoint(path: &Path, signature: &str) -> Result<Checkpoint, ScanError> {
    let text = fs::read_to_string(path)?;
    let cp: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| WaringError::InvalidInput(format!("unreadable checkpoint {}: {e}", path.display())))?;
    if cp.job_signature != signature {
        return Err(ScanError::Domain(WaringError::InvalidInput(format!(
            "checkpoint {} belongs to a different scan",
            path.display()
        ))));
    }
    Ok(cp)
}

/// Write to a sibling temporary file, sync, then rename over the target.
fn write_checkpoint(path: &Path, cp: &Checkpoint) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = File::create(&tmp)?;
        f.write_all(serde_json::to_string_pretty(cp).expect("checkpoint serializes").as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(format: Format, jobs: usize) -> ScanJob {
        ScanJob {
            ks: 3..=4,
            bound: Bound::Fixed(60),
            filter: None,
            format,
            out: None,
            jobs,
            checkpoint: None,
            chunk_size: 5,
            stop_after_chunks: None,
        }
    }

    fn to_string(job: &ScanJob) -> String {
        let mut out = Vec::new();
        run_scan(job, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn csv_rows_and_blank_gamma_for_uncoverable() {
        let text = to_string(&job(Format::Csv, 2));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,q,coverable,gamma");
        assert!(lines.contains(&"3,7,true,3"));
        assert!(lines.contains(&"3,4,false,"));
        assert!(lines.contains(&"4,9,false,"));
    }

    #[test]
    fn json_is_an_array_of_rows() {
        let text = to_string(&job(Format::Json, 3));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows[0]["k"], 3);
        assert!(rows.iter().any(|r| r["q"] == 4 && r.get("gamma").is_none()));

        let mut empty = job(Format::Json, 1);
        empty.filter = Some(40..=50);
        assert_eq!(to_string(&empty), "[\n]\n");
    }

    #[test]
    fn worker_count_does_not_change_bytes() {
        let a = to_string(&job(Format::Json, 1));
        let b = to_string(&job(Format::Json, 7));
        assert_eq!(a, b);
    }

    #[test]
    fn signature_tracks_output_shape() {
        let a = job(Format::Csv, 1);
        let mut b = a.clone();
        b.jobs = 9;
        assert_eq!(a.signature(), b.signature());
        b.filter = Some(3..=3);
        assert_ne!(a.signature(), b.signature());
    }
}
