//! On-disk formats: Matrix Market exchange files for matrices and vectors,
//! and a JSON manifest describing a block system by per-block files.

use crate::linalg::{Mat, SymMatrix};
use crate::saddle::{BlockTridiagonalSystem, SaddleError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Errors from readers and writers, always carrying the offending path.
#[derive(Debug)]
pub enum IoError {
    Io { path: PathBuf, source: std::io::Error },
    Parse { path: PathBuf, line: usize, detail: String },
    Format { path: PathBuf, detail: String },
    Manifest { path: PathBuf, detail: String },
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            IoError::Parse { path, line, detail } => {
                write!(f, "{}:{line}: {detail}", path.display())
            }
            IoError::Format { path, detail } => write!(f, "{}: {detail}", path.display()),
            IoError::Manifest { path, detail } => write!(f, "{}: {detail}", path.display()),
        }
    }
}

impl std::error::Error for IoError {}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io { path: path.to_path_buf(), source }
}

struct MmHeader {
    coordinate: bool,
    symmetric: bool,
}

fn parse_header(path: &Path, line: &str) -> Result<MmHeader, IoError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 5 || !fields[0].eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(IoError::Format {
            path: path.to_path_buf(),
            detail: format!("bad MatrixMarket banner: {line:?}"),
        });
    }
    if !fields[1].eq_ignore_ascii_case("matrix") {
        return Err(IoError::Format {
            path: path.to_path_buf(),
            detail: format!("unsupported object {:?}", fields[1]),
        });
    }
    let coordinate = match fields[2].to_ascii_lowercase().as_str() {
        "coordinate" => true,
        "array" => false,
        other => {
            return Err(IoError::Format {
                path: path.to_path_buf(),
                detail: format!("unsupported format {other:?}"),
            })
        }
    };
    match fields[3].to_ascii_lowercase().as_str() {
        "real" | "integer" => {}
        other => {
            return Err(IoError::Format {
                path: path.to_path_buf(),
                detail: format!("unsupported field type {other:?}"),
            })
        }
    }
    let symmetric = match fields[4].to_ascii_lowercase().as_str() {
        "general" => false,
        "symmetric" => true,
        other => {
            return Err(IoError::Format {
                path: path.to_path_buf(),
                detail: format!("unsupported symmetry {other:?}"),
            })
        }
    };
    Ok(MmHeader { coordinate, symmetric })
}

fn data_lines(
    path: &Path,
    reader: impl BufRead,
) -> Result<(MmHeader, Vec<(usize, String)>), IoError> {
    let mut lines = Vec::new();
    let mut header = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let trimmed = line.trim();
        if idx == 0 {
            header = Some(parse_header(path, trimmed)?);
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        lines.push((idx + 1, trimmed.to_string()));
    }
    let header = header.ok_or_else(|| IoError::Format {
        path: path.to_path_buf(),
        detail: "empty file".into(),
    })?;
    Ok((header, lines))
}

fn parse_fields(path: &Path, line_no: usize, line: &str, n: usize) -> Result<Vec<f64>, IoError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != n {
        return Err(IoError::Parse {
            path: path.to_path_buf(),
            line: line_no,
            detail: format!("expected {n} fields, got {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>().map_err(|e| IoError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                detail: format!("{f:?}: {e}"),
            })
        })
        .collect()
}

/// Read a general rectangular matrix from a Matrix Market file.
pub fn read_mat(path: &Path) -> Result<Mat, IoError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let (header, lines) = data_lines(path, BufReader::new(file))?;
    let mut iter = lines.into_iter();
    let (size_no, size_line) = iter.next().ok_or_else(|| IoError::Format {
        path: path.to_path_buf(),
        detail: "missing size line".into(),
    })?;

    if header.coordinate {
        let sizes = parse_fields(path, size_no, &size_line, 3)?;
        let (rows, cols, nnz) = (sizes[0] as usize, sizes[1] as usize, sizes[2] as usize);
        let mut m = Mat::zeros(rows, cols);
        let mut count = 0;
        for (no, line) in iter {
            let f = parse_fields(path, no, &line, 3)?;
            let (i, j, v) = (f[0] as usize - 1, f[1] as usize - 1, f[2]);
            if i >= rows || j >= cols {
                return Err(IoError::Parse {
                    path: path.to_path_buf(),
                    line: no,
                    detail: format!("index ({}, {}) out of bounds", i + 1, j + 1),
                });
            }
            m.set(i, j, v);
            if header.symmetric && i != j {
                m.set(j, i, v);
            }
            count += 1;
        }
        if count != nnz {
            return Err(IoError::Format {
                path: path.to_path_buf(),
                detail: format!("declared {nnz} entries, found {count}"),
            });
        }
        Ok(m)
    } else {
        let sizes = parse_fields(path, size_no, &size_line, 2)?;
        let (rows, cols) = (sizes[0] as usize, sizes[1] as usize);
        let mut values = Vec::with_capacity(rows * cols);
        for (no, line) in iter {
            values.push(parse_fields(path, no, &line, 1)?[0]);
        }
        let expected = if header.symmetric {
            cols * (cols + 1) / 2
        } else {
            rows * cols
        };
        if values.len() != expected {
            return Err(IoError::Format {
                path: path.to_path_buf(),
                detail: format!("expected {expected} array entries, found {}", values.len()),
            });
        }
        let mut m = Mat::zeros(rows, cols);
        if header.symmetric {
            // column-major lower triangle
            let mut it = values.into_iter();
            for j in 0..cols {
                for i in j..rows {
                    let v = it.next().unwrap();
                    m.set(i, j, v);
                    m.set(j, i, v);
                }
            }
        } else {
            let mut it = values.into_iter();
            for j in 0..cols {
                for i in 0..rows {
                    m.set(i, j, it.next().unwrap());
                }
            }
        }
        Ok(m)
    }
}

/// Read a symmetric matrix; generally stored files are accepted when they
/// are numerically symmetric.
pub fn read_sym_matrix(path: &Path) -> Result<SymMatrix, IoError> {
    let m = read_mat(path)?;
    if m.nrows() != m.ncols() {
        return Err(IoError::Format {
            path: path.to_path_buf(),
            detail: format!("matrix is {}x{}, not square", m.nrows(), m.ncols()),
        });
    }
    for i in 0..m.nrows() {
        for j in 0..i {
            if m.get(i, j) != m.get(j, i) {
                return Err(IoError::Format {
                    path: path.to_path_buf(),
                    detail: format!("asymmetric entries at ({}, {})", i + 1, j + 1),
                });
            }
        }
    }
    Ok(SymMatrix::from_fn(m.nrows(), |i, j| m.get(i, j)))
}

/// Read a vector stored as a single-column array file.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, IoError> {
    let m = read_mat(path)?;
    if m.ncols() != 1 {
        return Err(IoError::Format {
            path: path.to_path_buf(),
            detail: format!("expected a single column, got {}", m.ncols()),
        });
    }
    Ok((0..m.nrows()).map(|i| m.get(i, 0)).collect())
}

/// Write a symmetric matrix in coordinate format (lower-triangle entries).
pub fn write_sym_matrix(path: &Path, m: &SymMatrix) -> Result<(), IoError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut entries = Vec::new();
    for i in 0..m.n() {
        for j in 0..=i {
            let v = m.get(i, j);
            if v != 0.0 {
                entries.push((i + 1, j + 1, v));
            }
        }
    }
    (|| -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
        writeln!(w, "{} {} {}", m.n(), m.n(), entries.len())?;
        for (i, j, v) in entries {
            writeln!(w, "{i} {j} {v}")?;
        }
        w.flush()
    })()
    .map_err(io_err(path))
}

/// Write a general matrix in coordinate format.
pub fn write_mat(path: &Path, m: &Mat) -> Result<(), IoError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut entries = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m.get(i, j);
            if v != 0.0 {
                entries.push((i + 1, j + 1, v));
            }
        }
    }
    (|| -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", m.nrows(), m.ncols(), entries.len())?;
        for (i, j, v) in entries {
            writeln!(w, "{i} {j} {v}")?;
        }
        w.flush()
    })()
    .map_err(io_err(path))
}

/// Write a vector as a single-column array file.
pub fn write_vector(path: &Path, v: &[f64]) -> Result<(), IoError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    (|| -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix array real general")?;
        writeln!(w, "{} 1", v.len())?;
        for x in v {
            writeln!(w, "{x}")?;
        }
        w.flush()
    })()
    .map_err(io_err(path))
}

/// JSON manifest describing a block system by per-block Matrix Market files;
/// paths are relative to the manifest location.
#[derive(Serialize, Deserialize)]
pub struct BlockSystemManifest {
    pub n: usize,
    pub sizes: Vec<usize>,
    pub diag_blocks: Vec<String>,
    pub offdiag_blocks: Vec<String>,
}

/// Load and validate a block system from a manifest file.
pub fn read_block_system(manifest_path: &Path) -> Result<BlockTridiagonalSystem, IoError> {
    let text = fs::read_to_string(manifest_path).map_err(io_err(manifest_path))?;
    let manifest: BlockSystemManifest =
        serde_json::from_str(&text).map_err(|e| IoError::Manifest {
            path: manifest_path.to_path_buf(),
            detail: e.to_string(),
        })?;
    let bad = |detail: String| IoError::Manifest { path: manifest_path.to_path_buf(), detail };
    if manifest.diag_blocks.len() != manifest.n + 1 {
        return Err(bad(format!(
            "N = {} needs {} diagonal blocks, got {}",
            manifest.n,
            manifest.n + 1,
            manifest.diag_blocks.len()
        )));
    }
    if manifest.offdiag_blocks.len() != manifest.n {
        return Err(bad(format!(
            "N = {} needs {} couplings, got {}",
            manifest.n,
            manifest.n,
            manifest.offdiag_blocks.len()
        )));
    }
    if manifest.sizes.len() != manifest.n + 1 {
        return Err(bad("sizes length mismatch".into()));
    }
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let mut diag = Vec::new();
    for (k, rel) in manifest.diag_blocks.iter().enumerate() {
        let m = read_sym_matrix(&base.join(rel))?;
        if m.n() != manifest.sizes[k] {
            return Err(bad(format!(
                "diagonal block {k} has size {}, manifest says {}",
                m.n(),
                manifest.sizes[k]
            )));
        }
        diag.push(m);
    }
    let mut offdiag = Vec::new();
    for rel in &manifest.offdiag_blocks {
        offdiag.push(read_mat(&base.join(rel))?);
    }
    BlockTridiagonalSystem::new(diag, offdiag).map_err(|e: SaddleError| IoError::Manifest {
        path: manifest_path.to_path_buf(),
        detail: e.to_string(),
    })
}

/// Write a block system as a manifest plus per-block files under `dir`.
pub fn write_block_system(dir: &Path, sys: &BlockTridiagonalSystem) -> Result<PathBuf, IoError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut diag_blocks = Vec::new();
    for k in 0..sys.n_blocks() {
        let name = format!("a{k}.mtx");
        write_sym_matrix(&dir.join(&name), sys.diag_block(k))?;
        diag_blocks.push(name);
    }
    let mut offdiag_blocks = Vec::new();
    for k in 1..=sys.big_n() {
        let name = format!("b{k}.mtx");
        write_mat(&dir.join(&name), sys.offdiag_block(k))?;
        offdiag_blocks.push(name);
    }
    let manifest = BlockSystemManifest {
        n: sys.big_n(),
        sizes: sys.sizes().to_vec(),
        diag_blocks,
        offdiag_blocks,
    };
    let path = dir.join("system.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text).map_err(io_err(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn tmpdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("msp-io-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn sym_matrix_round_trip_exact() {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let m = SymMatrix::from_fn(7, |_, _| rng.gen_range(-1.0..1.0));
        let dir = tmpdir("sym");
        let path = dir.join("m.mtx");
        write_sym_matrix(&path, &m).unwrap();
        let back = read_sym_matrix(&path).unwrap();
        assert_eq!(m, back, "round trip must be bit exact");
    }

    #[test]
    fn rectangular_round_trip_and_vector() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let m = Mat::from_fn(4, 6, |_, _| rng.gen_range(-3.0..3.0));
        let dir = tmpdir("rect");
        let path = dir.join("b.mtx");
        write_mat(&path, &m).unwrap();
        assert_eq!(read_mat(&path).unwrap(), m);

        let v: Vec<f64> = (0..9).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let vp = dir.join("v.mtx");
        write_vector(&vp, &v).unwrap();
        assert_eq!(read_vector(&vp).unwrap(), v);
    }

    #[test]
    fn reads_array_format_and_rejects_asymmetric() {
        let dir = tmpdir("arr");
        let path = dir.join("a.mtx");
        fs::write(
            &path,
            "%%MatrixMarket matrix array real general\n% comment\n2 2\n1.0\n2.0\n2.0\n5.0\n",
        )
        .unwrap();
        let m = read_sym_matrix(&path).unwrap();
        assert_eq!(m.get(0, 1), 2.0);
        assert_eq!(m.get(1, 1), 5.0);

        let bad = dir.join("bad.mtx");
        fs::write(
            &bad,
            "%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n3.0\n5.0\n",
        )
        .unwrap();
        assert!(matches!(read_sym_matrix(&bad), Err(IoError::Format { .. })));
    }

    #[test]
    fn block_system_manifest_round_trip() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let a0 = {
            let g = Mat::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
            let mut s = SymMatrix::gram(&g);
            s.add_scaled_identity(2.0);
            s
        };
        let a1 = SymMatrix::zeros(3);
        let b1 = Mat::from_fn(3, 4, |_, _| rng.gen_range(-1.0..1.0));
        let sys = BlockTridiagonalSystem::new(vec![a0, a1], vec![b1]).unwrap();
        let dir = tmpdir("manifest");
        let manifest = write_block_system(&dir, &sys).unwrap();
        let back = read_block_system(&manifest).unwrap();
        assert_eq!(back.sizes(), sys.sizes());
        for k in 0..2 {
            assert_eq!(back.diag_block(k), sys.diag_block(k));
        }
        assert_eq!(back.offdiag_block(1), sys.offdiag_block(1));
    }

    #[test]
    fn manifest_errors_carry_path_context() {
        let dir = tmpdir("badmanifest");
        let path = dir.join("system.json");
        fs::write(&path, r#"{"n": 1, "sizes": [2, 1], "diag_blocks": ["x.mtx"], "offdiag_blocks": []}"#).unwrap();
        let err = read_block_system(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("system.json"), "missing path context: {msg}");
    }
}
