//! Static SVG plots, drawn only from the rows of a written CSV file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

const W: f64 = 480.0;
const H: f64 = 480.0;
const PAD: f64 = 48.0;

/// Columns of a report CSV (the leading `#` line is skipped).
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn read(path: &Path) -> Result<Self, String> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let header = rdr.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|r| r.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        Ok(Self { header, rows })
    }

    fn col(&self, name: &str) -> Result<Vec<f64>, String> {
        let i = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("column `{name}` missing"))?;
        Ok(self.rows.iter().map(|r| r[i].parse().unwrap_or(f64::NAN)).collect())
    }
}

/// Linear map of `[lo, hi]` onto the drawing range.
struct Axis {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Axis {
    fn new(lo: f64, hi: f64, from: f64, to: f64) -> Self {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, lo + 1.0) };
        Self { lo, hi, from, to }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }
}

fn range(xs: &[f64]) -> (f64, f64) {
    let f: Vec<f64> = xs.iter().copied().filter(|x| x.is_finite()).collect();
    let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn frame(title: &str, xlabel: &str, ylabel: &str) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="{W}" height="{H}" fill="white"/>
<text x="{}" y="20" text-anchor="middle">{title}</text>
<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>
<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{ylabel}</text>
<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>
"#,
        W / 2.0,
        W / 2.0,
        H - 10.0,
        H / 2.0,
        H / 2.0,
        W - 2.0 * PAD,
        H - 2.0 * PAD,
    );
    s
}

fn tick_labels(s: &mut String, x: &Axis, y: &Axis) {
    for (v, ax, horizontal) in [(x.lo, x, true), (x.hi, x, true), (y.lo, y, false), (y.hi, y, false)] {
        let p = ax.map(v);
        if horizontal {
            let _ = writeln!(s, r#"<text x="{p:.1}" y="{:.1}" text-anchor="middle">{v:.3}</text>"#, H - PAD + 16.0);
        } else {
            let _ = writeln!(s, r#"<text x="{:.1}" y="{p:.1}" text-anchor="end">{v:.3}</text>"#, PAD - 4.0);
        }
    }
}

fn save(path: PathBuf, mut body: String) -> Result<PathBuf, String> {
    body.push_str("</svg>\n");
    fs::write(&path, body).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(path)
}

/// Zeros as points inside the outline of `|z| = radius`.
pub fn zeros_scatter(csv: &Path, radius: f64, out: PathBuf) -> Result<PathBuf, String> {
    let t = Table::read(csv)?;
    let (re, im) = (t.col("re")?, t.col("im")?);
    let ax = Axis::new(-radius * 1.05, radius * 1.05, PAD, W - PAD);
    let ay = Axis::new(-radius * 1.05, radius * 1.05, H - PAD, PAD);
    let mut s = frame("zeros", "Re z", "Im z");
    let _ = writeln!(
        s,
        r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="gray"/>"#,
        ax.map(0.0),
        ay.map(0.0),
        ax.map(radius) - ax.map(0.0)
    );
    for (x, y) in re.iter().zip(&im) {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue"/>"#, ax.map(*x), ay.map(*y));
    }
    tick_labels(&mut s, &ax, &ay);
    save(out, s)
}

fn polyline(s: &mut String, xs: &[f64], ys: &[f64], ax: &Axis, ay: &Axis, color: &str) {
    let pts: Vec<String> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(x, y)| format!("{:.2},{:.2}", ax.map(*x), ay.map(*y)))
        .collect();
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" "));
    for p in pts {
        let (x, y) = p.split_once(',').unwrap();
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="{color}"/>"#);
    }
}

/// `S(r)/r⁴` against `r`, with a horizontal line at `e²/4`.
pub fn growth_curve(csv: &Path, out: PathBuf) -> Result<PathBuf, String> {
    let t = Table::read(csv)?;
    let (r, y) = (t.col("r")?, t.col("S_over_r4")?);
    let line = std::f64::consts::E.powi(2) / 4.0;
    let (lo, hi) = range(&y);
    let ax = {
        let (a, b) = range(&r);
        Axis::new(a, b, PAD, W - PAD)
    };
    let ay = Axis::new(lo.min(line) * 0.95, hi.max(line) * 1.05, H - PAD, PAD);
    let mut s = frame("S(r)/r^4", "r", "S/r^4");
    let _ = writeln!(
        s,
        r#"<line x1="{PAD}" x2="{}" y1="{:.2}" y2="{:.2}" stroke="red" stroke-dasharray="4 3"/>"#,
        W - PAD,
        ay.map(line),
        ay.map(line)
    );
    polyline(&mut s, &r, &y, &ax, &ay, "steelblue");
    tick_labels(&mut s, &ax, &ay);
    save(out, s)
}

/// `−log P̂` per radius against `S(r)`, from per-trial hole indicators.
pub fn hole_curve(csv: &Path, out: PathBuf) -> Result<PathBuf, String> {
    let t = Table::read(csv)?;
    let (r, hole) = (t.col("r")?, t.col("hole_root_finder")?);
    let mut radii: Vec<f64> = r.clone();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let nlp: Vec<f64> = radii
        .iter()
        .map(|&x| {
            let (mut h, mut n) = (0.0, 0.0);
            for (ri, hi) in r.iter().zip(&hole) {
                if *ri == x {
                    h += hi;
                    n += 1.0;
                }
            }
            -(h / n).ln()
        })
        .collect();
    let (a, b) = range(&radii);
    let (lo, hi) = range(&nlp);
    let ax = Axis::new(a, b, PAD, W - PAD);
    let ay = Axis::new(lo.min(0.0), hi * 1.05, H - PAD, PAD);
    let mut s = frame("hole probability", "r", "-log P");
    polyline(&mut s, &radii, &nlp, &ax, &ay, "steelblue");
    tick_labels(&mut s, &ax, &ay);
    save(out, s)
}

/// Mean zero count per sector at the largest radius.
pub fn sector_histogram(csv: &Path, out: PathBuf) -> Result<PathBuf, String> {
    let t = Table::read(csv)?;
    let r = t.col("r")?;
    let r_max = range(&r).1;
    let sector_cols: Vec<&String> = t.header.iter().filter(|h| h.starts_with("sector_")).collect();
    let mut means = Vec::new();
    for c in &sector_cols {
        let v = t.col(c)?;
        let sel: Vec<f64> = v.iter().zip(&r).filter(|(_, ri)| **ri == r_max).map(|(x, _)| *x).collect();
        means.push(sel.iter().sum::<f64>() / sel.len().max(1) as f64);
    }
    let k = means.len().max(1) as f64;
    let top = range(&means).1.max(1e-9);
    let ay = Axis::new(0.0, top * 1.1, H - PAD, PAD);
    let mut s = frame("zeros per sector", "sector", "mean count");
    let bw = (W - 2.0 * PAD) / k;
    for (i, m) in means.iter().enumerate() {
        let y = ay.map(*m);
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="steelblue" stroke="white"/>"#,
            PAD + i as f64 * bw,
            bw,
            H - PAD - y
        );
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{top:.3}</text>"#, PAD - 4.0, ay.map(top));
    save(out, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("zeros.csv");
        fs::write(&csv, "# zeros seed=1 config_hash=x\ntrial_id,re,im,modulus,multiplicity,method\n0,0.5,0.5,0.7,1,root_finder\n").unwrap();
        let p = zeros_scatter(&csv, 1.0, dir.path().join("z.svg")).unwrap();
        let svg = fs::read_to_string(p).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("fill=\"steelblue\"").count(), 1);
    }
}
