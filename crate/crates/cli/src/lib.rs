//! File formats, JSON reports and command implementations behind the
//! `clawfree` binary.
//!
//! Exit statuses are a stable contract: 0 for success or a positive
//! verdict, 1 for a negative verdict, 2 for unusable input.

pub mod commands;
pub mod dot;
pub mod format;

use std::path::{Path, PathBuf};

use clawfree_core::Graph;
use serde_json::json;

use commands::{Body, Exit, InputError, Outcome};
use format::Format;

/// An input error tied to the file it came from, shown as
/// `path:line:column: message` when the position is known.
#[derive(Debug, thiserror::Error)]
pub struct FileError {
    pub path: PathBuf,
    #[source]
    pub source: InputError,
}

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.source {
            InputError::Invalid(m) => write!(f, "{}: {m}", self.path.display()),
            positioned => write!(f, "{}:{positioned}", self.path.display()),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path)
        .map_err(|e| FileError { path: path.to_path_buf(), source: InputError::Invalid(format!("cannot read: {e}")) })
}

/// Read a graph, taking the format from the extension unless given.
pub fn read_graph(path: &Path, format: Option<Format>) -> Result<Graph, FileError> {
    let src = read_text(path)?;
    let fmt = format.unwrap_or_else(|| Format::from_path(path));
    format::parse(&src, fmt).map_err(|e| FileError { path: path.to_path_buf(), source: e.into() })
}

/// Sorted paths matching a glob pattern.
pub fn expand_glob(pattern: &str) -> Result<Vec<PathBuf>, InputError> {
    let paths = glob::glob(pattern).map_err(|e| InputError::Invalid(format!("bad glob '{pattern}': {e}")))?;
    let mut out: Vec<PathBuf> = paths.filter_map(Result::ok).filter(|p| p.is_file()).collect();
    out.sort();
    Ok(out)
}

/// Run `command` on every file, spread over worker threads. The output
/// is one JSON line per file in path order; the exit status is the worst
/// one seen.
pub fn batch<F>(paths: &[PathBuf], format: Option<Format>, command: F) -> Outcome
where
    F: Fn(&Graph) -> Outcome + Sync,
{
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(paths.len().max(1));
    let mut results: Vec<Option<(Exit, serde_json::Value)>> = vec![None; paths.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        let Some(path) = paths.get(i) else { break };
                        let file = path.display().to_string();
                        let line = match read_graph(path, format) {
                            Ok(g) => {
                                let o = command(&g);
                                let report = match o.body {
                                    Body::Json(v) => v,
                                    Body::Text(t) => json!(t),
                                };
                                (o.exit, json!({ "file": file, "exit": o.exit as u8, "report": report }))
                            }
                            Err(e) => (
                                Exit::InputError,
                                json!({ "file": file, "exit": Exit::InputError as u8, "error": e.source.to_string() }),
                            ),
                        };
                        done.push((i, line));
                    }
                    done
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("batch worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    let mut exit = Exit::Success;
    let mut text = String::new();
    for (e, line) in results.into_iter().flatten() {
        exit = exit.max(e);
        text.push_str(&serde_json::to_string(&line).expect("report serialises"));
        text.push('\n');
    }
    Outcome { body: Body::Text(text), exit }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_keeps_path_order_and_worst_exit() {
        let dir = tempfile::tempdir().unwrap();
        let files = [("a.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n"), ("b.txt", "0 1\n0 2\n0 3\n"), ("c.txt", "0 x\n")];
        for (name, body) in files {
            std::fs::write(dir.path().join(name), body).unwrap();
        }
        let paths = expand_glob(&format!("{}/*.txt", dir.path().display())).unwrap();
        assert_eq!(paths.len(), 3);
        let o = batch(&paths, None, commands::check);
        assert_eq!(o.exit, Exit::InputError);
        let Body::Text(t) = o.body else { panic!() };
        let exits: Vec<u64> = t
            .lines()
            .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["exit"].as_u64().unwrap())
            .collect();
        assert_eq!(exits, [0, 1, 2]);
    }
}
