//! Self-describing CSV grids and JSON reports.
//!
//! A grid file is a block of `# key = value` header lines followed by a CSV
//! table with a header row. Values are written with 17 significant digits so
//! that reading a file back reproduces every `f64` exactly.

use crate::direct::{DataTolerances, InitialData, SampledFunction};
use crate::soliton::{Grid, SolutionField};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

/// Format tag written as the first header line.
pub const FORMAT: &str = "bsq-grid";
pub const VERSION: u32 = 1;

/// Relative tolerance on the spacing of ingested `x` columns.
const UNIFORM_TOL: f64 = 1e-9;

/// A table of named real columns with string metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridFile {
    pub header: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

impl GridFile {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            header: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.header.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Index of a named column.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// `x,t,u,v` rows of a solution field, `x` varying fastest.
    pub fn from_field(field: &SolutionField) -> Self {
        let g = field.grid;
        let mut out = Self::new(&["x", "t", "u", "v"])
            .with_meta("kind", "field")
            .with_meta("source", format!("{:?}", field.source))
            .with_meta("nx", g.nx)
            .with_meta("nt", g.nt)
            .with_meta("hx", fmt(g.hx))
            .with_meta("ht", fmt(g.ht))
            .with_meta("max_imag", fmt(field.max_imag));
        for (k, v) in &field.metadata {
            out.header.insert(format!("meta.{k}"), fmt(*v));
        }
        for j in 0..g.nt {
            for i in 0..g.nx {
                let v = field.v_at(j, i).unwrap_or(f64::NAN);
                out.push(vec![g.x(i), g.t(j), field.u_at(j, i), v]);
            }
        }
        out
    }

    /// Inverse of [`GridFile::from_field`]; `v` is optional.
    pub fn to_field(&self) -> Result<SolutionField> {
        let bad = |m: String| Error::InvalidInput(m);
        let (Some(x), Some(t), Some(u)) = (self.column("x"), self.column("t"), self.column("u"))
        else {
            return Err(bad(format!(
                "expected columns x,t,u[,v], found {:?}",
                self.columns
            )));
        };
        let v = self.column("v");
        if let Some(n) = u
            .iter()
            .chain(v.iter().flatten())
            .position(|z| !z.is_finite())
        {
            return Err(bad(format!("non-finite field value at entry {n}")));
        }
        let nx = t.iter().take_while(|&&s| s == t[0]).count();
        if nx < 2 || t.len() % nx != 0 {
            return Err(bad("rows do not form a rectangular x-fastest grid".into()));
        }
        let nt = t.len() / nx;
        let hx = (x[nx - 1] - x[0]) / (nx - 1) as f64;
        let ht = if nt > 1 {
            (t[nx * (nt - 1)] - t[0]) / (nt - 1) as f64
        } else {
            0.0
        };
        let grid = Grid {
            x_min: x[0],
            hx,
            nx,
            t_min: t[0],
            ht,
            nt,
        };
        let near =
            |a: f64, b: f64, h: f64| (a - b).abs() <= UNIFORM_TOL * (h + a.abs().max(b.abs()));
        for (n, (&xn, &tn)) in x.iter().zip(&t).enumerate() {
            let (i, j) = (n % nx, n / nx);
            if !(hx > 0.0 && near(xn, grid.x(i), hx) && near(tn, grid.t(j), ht)) {
                return Err(bad(format!("row {} is off the uniform grid", n + 1)));
            }
        }
        Ok(SolutionField {
            u,
            v,
            ..SolutionField::zero(grid)
        })
    }

    /// `x,u0,v0` rows of initial data.
    pub fn from_initial_data(data: &InitialData) -> Self {
        let mut out = Self::new(&["x", "u0", "v0"])
            .with_meta("kind", "initial_data")
            .with_meta("hx", fmt(data.hx()));
        for (n, x) in data.xs().into_iter().enumerate() {
            out.push(vec![x, data.u0()[n], data.v0()[n]]);
        }
        out
    }

    /// Contour samples: piece index, piece parameter, `k` and the value.
    pub fn from_sampled(f: &SampledFunction, name: &str) -> Self {
        let mut out = Self::new(&["piece", "param", "k_re", "k_im", "value_re", "value_im"])
            .with_meta("kind", "contour")
            .with_meta("function", name);
        for (m, (piece, vals)) in f.pieces.iter().zip(&f.values).enumerate() {
            out.header
                .insert(format!("piece.{m}"), format!("{:?}", piece.piece));
            for ((s, k), v) in piece.params.iter().zip(&piece.points).zip(vals) {
                out.push(vec![m as f64, *s, k.re, k.im, v.re, v.im]);
            }
        }
        out
    }

    /// Renders the file; identical inputs give identical bytes.
    pub fn to_string(&self) -> Result<String> {
        let mut s = format!("# {FORMAT} v{VERSION}\n");
        for (k, v) in &self.header {
            if k.contains(['=', '\n']) || v.contains('\n') {
                return Err(Error::InvalidInput(format!(
                    "header entry {k:?} is not representable"
                )));
            }
            s.push_str(&format!("# {k} = {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let enc = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record(&self.columns).map_err(enc)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| fmt(*v))).map_err(enc)?;
        }
        let body = w
            .into_inner()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        s.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header = BTreeMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            if let Some((k, v)) = line[1..].split_once('=') {
                header.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::InvalidInput(format!("malformed CSV: {e}"));
        let columns: Vec<String> = rdr
            .headers()
            .map_err(bad)?
            .iter()
            .map(str::to_string)
            .collect();
        if columns.is_empty() || columns.iter().any(String::is_empty) {
            return Err(Error::InvalidInput("missing or empty column names".into()));
        }
        let mut rows = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(bad)?;
            let row = rec
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidInput(format!("row {}: {e}", n + 1)))?;
            rows.push(row);
        }
        Ok(Self {
            header,
            columns,
            rows,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_string()?).map_err(|e| io_err(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::InvalidInput(m) => io_err(path, m),
            e => e,
        })
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::InvalidInput(format!("serialisation failed: {e}")))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?).map_err(|e| io_err(path, e))
}

/// Reads initial data from a grid file with columns `x,u0,v0` or `x,u0,u1`.
///
/// `x` must be uniform and increasing, every value finite, and `u1` (when
/// given) must integrate to zero within `mass_tol`; `v0` is then its
/// running integral.
pub fn ingest_initial_data(path: &Path) -> Result<InitialData> {
    ingest_with(path, DataTolerances::default())
}

pub fn ingest_with(path: &Path, tol: DataTolerances) -> Result<InitialData> {
    let file = GridFile::read(path)?;
    let ctx = |m: String| io_err(path, m);
    let col = |name: &str| file.column(name);
    let (x, u0) = match (col("x"), col("u0")) {
        (Some(x), Some(u0)) => (x, u0),
        _ => {
            return Err(ctx(format!(
                "expected columns x,u0,v0 or x,u0,u1, found {:?}",
                file.columns
            )))
        }
    };
    if let Some((n, _)) = file
        .rows
        .iter()
        .enumerate()
        .find(|(_, r)| r.iter().any(|v| !v.is_finite()))
    {
        return Err(ctx(format!("non-finite value in row {}", n + 1)));
    }
    if x.len() < 9 {
        return Err(ctx(format!("{} rows, need at least 9", x.len())));
    }
    let hx = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    if !(hx > 0.0) {
        return Err(ctx("x must be increasing".into()));
    }
    for (n, w) in x.windows(2).enumerate() {
        if ((w[1] - w[0]) - hx).abs() > UNIFORM_TOL * hx.max(x[0].abs()) + UNIFORM_TOL {
            return Err(ctx(format!("nonuniform x spacing at row {}", n + 2)));
        }
    }
    match (col("v0"), col("u1")) {
        (Some(v0), None) => InitialData::with_tolerances(x[0], hx, u0, v0, tol),
        (None, Some(u1)) => InitialData::from_u1(x[0], hx, u0, u1, tol),
        (Some(_), Some(_)) => Err(ctx("give either v0 or u1, not both".into())),
        (None, None) => Err(ctx("missing v0 or u1 column".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn values_round_trip_exactly() {
        let mut g = GridFile::new(&["a", "b"]).with_meta("note", "x");
        let vals = [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            f64::MAX,
            5e-324,
            std::f64::consts::PI,
        ];
        for v in vals {
            g.push(vec![v, -v]);
        }
        let back = GridFile::parse(&g.to_string().unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rendering_is_deterministic() {
        let d = InitialData::gaussian();
        let a = GridFile::from_initial_data(&d).to_string().unwrap();
        let b = GridFile::from_initial_data(&d).to_string().unwrap();
        assert_eq!(a, b);
    }

    fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn table(cols: &str, rows: impl Iterator<Item = [f64; 3]>) -> String {
        let mut s = format!("{cols}\n");
        for r in rows {
            s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", r[0], r[1], r[2]));
        }
        s
    }

    #[test]
    fn gaussian_with_zero_u1_is_accepted() {
        let dir = tempdir().unwrap();
        let rows = (0..6001).map(|i| {
            let x = -30.0 + 0.01 * i as f64;
            [x, (-x * x).exp(), 0.0]
        });
        let p = write(dir.path(), "g.csv", &table("x,u0,u1", rows));
        let d = ingest_initial_data(&p).unwrap();
        assert!(d.v0().iter().all(|&v| v == 0.0));
        assert_eq!(d.len(), 6001);
    }

    #[test]
    fn nonzero_mean_u1_is_rejected() {
        let dir = tempdir().unwrap();
        // ∫u1 = 1e-3
        let rows = (0..6001).map(|i| {
            let x = -30.0 + 0.01 * i as f64;
            [
                x,
                (-x * x).exp(),
                1e-3 * (-x * x).exp() / std::f64::consts::PI.sqrt(),
            ]
        });
        let p = write(dir.path(), "m.csv", &table("x,u0,u1", rows));
        assert!(matches!(
            ingest_initial_data(&p),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = tempdir().unwrap();
        let uniform = |i: usize| -1.0 + 0.25 * i as f64;
        let bad_x = write(
            dir.path(),
            "x.csv",
            &table(
                "x,u0,v0",
                (0..9).map(|i| [uniform(i) + if i == 4 { 0.01 } else { 0.0 }, 0.0, 0.0]),
            ),
        );
        let nan = write(
            dir.path(),
            "n.csv",
            &table("x,u0,v0", (0..9).map(|i| [uniform(i), f64::NAN, 0.0])),
        );
        let cols = write(
            dir.path(),
            "c.csv",
            &table("x,a,b", (0..9).map(|i| [uniform(i), 0.0, 0.0])),
        );
        for p in [bad_x, nan, cols] {
            let e = ingest_initial_data(&p).unwrap_err();
            assert_eq!(e.kind(), crate::error::ErrorKind::Config, "{e}");
        }
        let missing = dir.path().join("missing.csv");
        assert!(matches!(
            ingest_initial_data(&missing),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn initial_data_file_round_trips() {
        let dir = tempdir().unwrap();
        let d =
            InitialData::from_fn(10.0, 0.05, |x| (-x * x).exp(), |x| x * (-x * x).exp()).unwrap();
        let p = dir.path().join("d.csv");
        GridFile::from_initial_data(&d).write(&p).unwrap();
        assert_eq!(ingest_initial_data(&p).unwrap(), d);
    }

    #[test]
    fn field_file_round_trips() {
        let g = Grid::new((-5.0, 5.0, 101), (0.0, 0.3, 4)).unwrap();
        let c = crate::soliton::residue_for_shift(2.0, 0.0).unwrap();
        let f = crate::soliton::one_soliton(2.0, c, g).unwrap();
        let back = GridFile::parse(&GridFile::from_field(&f).to_string().unwrap())
            .unwrap()
            .to_field()
            .unwrap();
        assert_eq!(back.u, f.u);
        assert_eq!(back.v, f.v);
        assert_eq!((back.grid.nx, back.grid.nt), (101, 4));
        assert!((back.grid.ht - 0.1).abs() < 1e-15);
    }
}
