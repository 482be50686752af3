//! Density, velocity and pressure on the equispaced composite grid, written as CSV
//! or legacy VTK structured points. Values are row-major with x fastest.

use std::fmt;
use std::io::{self, BufRead, Write};

use esdg::analysis::sample_equispaced;
use esdg::{SemiDiscretization, SolutionField};

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub degree: usize,
    pub cells: (usize, usize),
    pub variant: String,
    pub grid: (usize, usize),
    pub origin: (f64, f64),
    pub spacing: (f64, f64),
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
}

#[derive(Debug)]
pub enum SnapshotError {
    Io(io::Error),
    Format { line: usize, message: String },
}

impl fmt::Display for SnapshotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(e) => write!(f, "{e}"),
            Self::Format { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl std::error::Error for SnapshotError {}

impl From<io::Error> for SnapshotError {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

fn bad(line: usize, message: impl Into<String>) -> SnapshotError {
    SnapshotError::Format {
        line,
        message: message.into(),
    }
}

impl Snapshot {
    /// Sample `u` at `N + 1` cell-centred equispaced points per element and axis.
    /// Pressure comes straight from the energy, so inadmissible states are written
    /// as they are.
    pub fn from_field(sd: &SemiDiscretization, u: &SolutionField, time: f64) -> Self {
        let mesh = sd.mesh();
        let n = sd.ops().n;
        let g1 = sd.gas().gamma_minus_one();
        let (grid, states) = sample_equispaced(sd, u);
        let spacing = (mesh.hx / n as f64, mesh.hy / n as f64);
        let mut snap = Self {
            time,
            degree: sd.config().degree,
            cells: (mesh.nx, mesh.ny),
            variant: sd.config().variant.to_string(),
            grid,
            origin: (mesh.xmin + 0.5 * spacing.0, mesh.ymin + 0.5 * spacing.1),
            spacing,
            rho: Vec::with_capacity(states.len()),
            u: Vec::with_capacity(states.len()),
            v: Vec::with_capacity(states.len()),
            p: Vec::with_capacity(states.len()),
        };
        for s in &states {
            let [rho, mx, my, e] = s.0;
            let (vx, vy) = (mx / rho, my / rho);
            snap.rho.push(rho);
            snap.u.push(vx);
            snap.v.push(vy);
            snap.p.push(g1 * (e - 0.5 * rho * (vx * vx + vy * vy)));
        }
        snap
    }

    pub fn len(&self) -> usize {
        self.grid.0 * self.grid.1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, idx: usize) -> (f64, f64) {
        let (i, j) = (idx % self.grid.0, idx / self.grid.0);
        (
            self.origin.0 + i as f64 * self.spacing.0,
            self.origin.1 + j as f64 * self.spacing.1,
        )
    }

    fn fields(&self) -> [(&'static str, &Vec<f64>); 4] {
        [("rho", &self.rho), ("u", &self.u), ("v", &self.v), ("p", &self.p)]
    }

    /// Comment header, then `x,y,rho,u,v,p` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# t = {:e}", self.time)?;
        writeln!(w, "# degree = {}", self.degree)?;
        writeln!(w, "# cells = {} {}", self.cells.0, self.cells.1)?;
        writeln!(w, "# variant = {}", self.variant)?;
        writeln!(w, "# grid = {} {}", self.grid.0, self.grid.1)?;
        writeln!(w, "# origin = {:e} {:e}", self.origin.0, self.origin.1)?;
        writeln!(w, "# spacing = {:e} {:e}", self.spacing.0, self.spacing.1)?;
        writeln!(w, "x,y,rho,u,v,p")?;
        for idx in 0..self.len() {
            let (x, y) = self.point(idx);
            writeln!(
                w,
                "{x:e},{y:e},{:e},{:e},{:e},{:e}",
                self.rho[idx], self.u[idx], self.v[idx], self.p[idx]
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, SnapshotError> {
        let mut header = std::collections::HashMap::new();
        let mut snap = Self::empty();
        let mut columns_seen = false;
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let ln = idx + 1;
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest.split_once('=').ok_or_else(|| bad(ln, "malformed header"))?;
                header.insert(k.trim().to_string(), (ln, v.trim().to_string()));
                continue;
            }
            if !columns_seen {
                if line.trim() != "x,y,rho,u,v,p" {
                    return Err(bad(ln, "expected column header 'x,y,rho,u,v,p'"));
                }
                columns_seen = true;
                snap.apply_header(&header)?;
                continue;
            }
            let vals: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| bad(ln, e.to_string()))?;
            if vals.len() != 6 {
                return Err(bad(ln, format!("expected 6 columns, found {}", vals.len())));
            }
            snap.rho.push(vals[2]);
            snap.u.push(vals[3]);
            snap.v.push(vals[4]);
            snap.p.push(vals[5]);
        }
        if !columns_seen {
            return Err(bad(0, "missing column header"));
        }
        if snap.rho.len() != snap.len() {
            return Err(bad(0, format!("expected {} rows, found {}", snap.len(), snap.rho.len())));
        }
        Ok(snap)
    }

    fn empty() -> Self {
        Self {
            time: 0.0,
            degree: 0,
            cells: (0, 0),
            variant: String::new(),
            grid: (0, 0),
            origin: (0.0, 0.0),
            spacing: (0.0, 0.0),
            rho: Vec::new(),
            u: Vec::new(),
            v: Vec::new(),
            p: Vec::new(),
        }
    }

    fn apply_header(&mut self, h: &std::collections::HashMap<String, (usize, String)>) -> Result<(), SnapshotError> {
        fn get<'a>(
            h: &'a std::collections::HashMap<String, (usize, String)>,
            key: &str,
        ) -> Result<(usize, &'a str), SnapshotError> {
            h.get(key)
                .map(|(l, v)| (*l, v.as_str()))
                .ok_or_else(|| bad(0, format!("missing header '{key}'")))
        }
        fn pair<T: std::str::FromStr>(line: usize, s: &str) -> Result<(T, T), SnapshotError> {
            let mut it = s.split_whitespace().map(|x| x.parse::<T>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
                _ => Err(bad(line, format!("expected two numbers, found '{s}'"))),
            }
        }
        let (l, t) = get(h, "t")?;
        self.time = t.parse().map_err(|_| bad(l, "invalid time"))?;
        let (l, d) = get(h, "degree")?;
        self.degree = d.parse().map_err(|_| bad(l, "invalid degree"))?;
        let (l, c) = get(h, "cells")?;
        self.cells = pair(l, c)?;
        self.variant = get(h, "variant")?.1.to_string();
        let (l, g) = get(h, "grid")?;
        self.grid = pair(l, g)?;
        let (l, o) = get(h, "origin")?;
        self.origin = pair(l, o)?;
        let (l, s) = get(h, "spacing")?;
        self.spacing = pair(l, s)?;
        Ok(())
    }

    /// Legacy VTK ASCII structured points, one scalar array per field, one value
    /// per line.
    pub fn write_vtk<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# vtk DataFile Version 3.0")?;
        writeln!(
            w,
            "esdg snapshot t={:e} N={} cells={}x{} variant={}",
            self.time, self.degree, self.cells.0, self.cells.1, self.variant
        )?;
        writeln!(w, "ASCII")?;
        writeln!(w, "DATASET STRUCTURED_POINTS")?;
        writeln!(w, "DIMENSIONS {} {} 1", self.grid.0, self.grid.1)?;
        writeln!(w, "ORIGIN {:e} {:e} 0", self.origin.0, self.origin.1)?;
        writeln!(w, "SPACING {:e} {:e} 1", self.spacing.0, self.spacing.1)?;
        writeln!(w, "POINT_DATA {}", self.len())?;
        for (name, data) in self.fields() {
            writeln!(w, "SCALARS {name} double 1")?;
            writeln!(w, "LOOKUP_TABLE default")?;
            for x in data {
                writeln!(w, "{x:e}")?;
            }
        }
        Ok(())
    }

    pub fn read_vtk<R: BufRead>(r: R) -> Result<Self, SnapshotError> {
        let lines: Vec<String> = r.lines().collect::<Result<_, _>>()?;
        let mut it = lines.iter().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let mut next = |what: &str| it.next().ok_or_else(|| bad(lines.len(), format!("unexpected end, expected {what}")));
        let (l, magic) = next("version line")?;
        if !magic.starts_with("# vtk DataFile Version") {
            return Err(bad(l, "not a legacy VTK file"));
        }
        let mut snap = Self::empty();
        let (l, title) = next("title")?;
        for tok in title.split_whitespace().skip(2) {
            let (k, v) = tok.split_once('=').ok_or_else(|| bad(l, format!("malformed title token '{tok}'")))?;
            match k {
                "t" => snap.time = v.parse().map_err(|_| bad(l, "invalid time"))?,
                "N" => snap.degree = v.parse().map_err(|_| bad(l, "invalid degree"))?,
                "cells" => {
                    let (a, b) = v.split_once('x').ok_or_else(|| bad(l, "invalid cells"))?;
                    snap.cells = (
                        a.parse().map_err(|_| bad(l, "invalid cells"))?,
                        b.parse().map_err(|_| bad(l, "invalid cells"))?,
                    );
                }
                "variant" => snap.variant = v.to_string(),
                _ => return Err(bad(l, format!("unknown title key '{k}'"))),
            }
        }
        let expect = |(l, s): (usize, &str), prefix: &str| -> Result<Vec<String>, SnapshotError> {
            s.strip_prefix(prefix)
                .map(|rest| rest.split_whitespace().map(str::to_string).collect())
                .ok_or_else(|| bad(l, format!("expected '{prefix}'")))
        };
        expect(next("ASCII")?, "ASCII")?;
        expect(next("DATASET")?, "DATASET STRUCTURED_POINTS")?;
        let line = next("DIMENSIONS")?;
        let dims = expect(line, "DIMENSIONS")?;
        let num = |l: usize, s: &String| s.parse::<f64>().map_err(|_| bad(l, format!("invalid number '{s}'")));
        if dims.len() != 3 || dims[2] != "1" {
            return Err(bad(line.0, "expected 'DIMENSIONS nx ny 1'"));
        }
        snap.grid = (
            dims[0].parse().map_err(|_| bad(line.0, "invalid dimension"))?,
            dims[1].parse().map_err(|_| bad(line.0, "invalid dimension"))?,
        );
        let line = next("ORIGIN")?;
        let o = expect(line, "ORIGIN")?;
        if o.len() != 3 {
            return Err(bad(line.0, "expected three origin values"));
        }
        snap.origin = (num(line.0, &o[0])?, num(line.0, &o[1])?);
        let line = next("SPACING")?;
        let s = expect(line, "SPACING")?;
        if s.len() != 3 {
            return Err(bad(line.0, "expected three spacing values"));
        }
        snap.spacing = (num(line.0, &s[0])?, num(line.0, &s[1])?);
        let line = next("POINT_DATA")?;
        let count: usize = expect(line, "POINT_DATA")?
            .first()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| bad(line.0, "invalid point count"))?;
        if count != snap.len() {
            return Err(bad(line.0, "point count does not match dimensions"));
        }
        for name in ["rho", "u", "v", "p"] {
            let line = next("SCALARS")?;
            let head = expect(line, "SCALARS")?;
            if head.first().map(String::as_str) != Some(name) {
                return Err(bad(line.0, format!("expected scalars '{name}'")));
            }
            expect(next("LOOKUP_TABLE")?, "LOOKUP_TABLE")?;
            let mut data = Vec::with_capacity(count);
            for _ in 0..count {
                let (l, s) = next("value")?;
                data.push(s.parse::<f64>().map_err(|_| bad(l, format!("invalid number '{s}'")))?);
            }
            match name {
                "rho" => snap.rho = data,
                "u" => snap.u = data,
                "v" => snap.v = data,
                _ => snap.p = data,
            }
        }
        Ok(snap)
    }
}
