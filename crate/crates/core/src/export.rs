//! CSV and JSON writers for snapshots, masks, trajectories and fronts.
//!
//! Every CSV starts with a header row. Numbers are written in Rust's
//! shortest round-trip form, so identical runs give identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::front::{FrontCurve, LawFit, LawForm};
use crate::grid::{HalfPlaneGrid, NodeMask, Quantity, ScalarField};
use crate::path::Trajectory;

/// `t,x,theta,u,v` for every node.
pub fn write_rd_snapshot<W: Write>(mut w: W, u: &ScalarField, v: &ScalarField) -> Result<()> {
    writeln!(w, "t,x,theta,u,v")?;
    let g = u.grid;
    for k in 0..g.len() {
        let (x, theta) = g.coords(k);
        writeln!(w, "{},{},{},{},{}", u.time, x, theta, u.values[k], v.values[k])?;
    }
    Ok(())
}

/// `t,x,theta,value,tag` for every node.
pub fn write_field<W: Write>(mut w: W, field: &ScalarField) -> Result<()> {
    writeln!(w, "t,x,theta,value,tag")?;
    let g = field.grid;
    let tag = field.quantity.tag();
    for (k, value) in field.values.iter().enumerate() {
        let (x, theta) = g.coords(k);
        writeln!(w, "{},{},{},{},{}", field.time, x, theta, value, tag)?;
    }
    Ok(())
}

/// Reads a file written by [`write_field`] or [`write_rd_snapshot`] (the
/// `u` column) back into a field. The grid is rebuilt from the distinct
/// coordinates, which must come in the writers' row-major order.
pub fn read_field<R: std::io::Read>(r: R) -> Result<ScalarField> {
    let bad = |msg: String| Error::Domain(format!("field csv: {msg}"));
    let mut reader = csv::Reader::from_reader(r);
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let fixed = headers.len() >= 4 && &headers[0] == "t" && &headers[1] == "x" && &headers[2] == "theta";
    let rd = fixed && &headers[3] == "u";
    if !fixed || !(rd || &headers[3] == "value") {
        return Err(bad(format!("unexpected header {headers:?}")));
    }
    let num = |rec: &csv::StringRecord, c: usize| -> Result<f64> {
        rec.get(c)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("line {}: column {c} is not a number", rec.position().map_or(0, |p| p.line()))))
    };
    let (mut time, mut quantity) = (None, if rd { Some(Quantity::U) } else { None });
    let (mut xs, mut thetas, mut values) = (Vec::new(), Vec::new(), Vec::new());
    for rec in reader.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        time.get_or_insert(num(&rec, 0)?);
        let (x, theta) = (num(&rec, 1)?, num(&rec, 2)?);
        if thetas.is_empty() || xs.len() == values.len() && x > *xs.last().unwrap() {
            xs.push(x);
        }
        if thetas.last().is_none_or(|&last| theta > last) {
            thetas.push(theta);
        }
        values.push(num(&rec, 3)?);
        if quantity.is_none() {
            let tag = rec.get(4).unwrap_or_default();
            quantity = Some(Quantity::from_tag(tag).ok_or_else(|| bad(format!("unknown tag {tag:?}")))?);
        }
    }
    let (nx, nt) = (xs.len(), thetas.len());
    if nx < 2 || nt < 2 || nx * nt != values.len() {
        return Err(bad(format!("{} rows do not form a grid ({nx} x {nt})", values.len())));
    }
    let grid = HalfPlaneGrid::new(xs[0], xs[nx - 1], thetas[nt - 1], nx, nt)?;
    Ok(ScalarField {
        grid,
        values,
        time: time.unwrap_or_default(),
        quantity: quantity.unwrap_or(Quantity::U),
    })
}

/// The nodes of a mask, one per line: `i,j,x,theta`.
pub fn write_mask<W: Write>(mut w: W, mask: &NodeMask) -> Result<()> {
    writeln!(w, "i,j,x,theta")?;
    let g = mask.grid;
    for j in 0..g.n_theta {
        for i in 0..g.n_x {
            if mask.get(i, j) {
                writeln!(w, "{},{},{},{}", i, j, g.x(i), g.theta(j))?;
            }
        }
    }
    Ok(())
}

pub fn write_trajectory<W: Write>(mut w: W, traj: &Trajectory) -> Result<()> {
    writeln!(w, "s,gamma1,gamma2")?;
    for (s, x, theta) in traj.samples() {
        writeln!(w, "{s},{x},{theta}")?;
    }
    Ok(())
}

/// `t,x_front,source,level`.
pub fn write_front_curve<W: Write>(mut w: W, curve: &FrontCurve) -> Result<()> {
    writeln!(w, "t,x_front,source,level")?;
    let source = serde_json::to_value(curve.source)?;
    let source = source.as_str().unwrap_or_default();
    for &(t, x) in &curve.samples {
        writeln!(w, "{t},{x},{source},{}", curve.level)?;
    }
    Ok(())
}

/// Per-row fronts `theta,x_front` of one snapshot.
pub fn write_row_fronts<W: Write>(mut w: W, rows: &[(f64, f64)]) -> Result<()> {
    writeln!(w, "theta,x_front")?;
    for (theta, x) in rows {
        writeln!(w, "{theta},{x}")?;
    }
    Ok(())
}

pub fn write_law_fits<W: Write>(mut w: W, fits: &[(LawForm, LawFit)]) -> Result<()> {
    writeln!(w, "form,c,alpha,log_correction,residual")?;
    for (form, fit) in fits {
        let name = match form {
            LawForm::Power => "power",
            LawForm::PowerSqrtLog { .. } => "power_sqrt_log",
        };
        writeln!(w, "{name},{},{},{},{}", fit.c, fit.alpha, fit.log_correction, fit.residual)?;
    }
    Ok(())
}

/// JSON summary of a front curve and the laws fitted to it.
#[derive(Debug, Serialize)]
pub struct FrontSummary<'a> {
    pub curve: &'a FrontCurve,
    pub monotone: bool,
    pub fits: Vec<FitEntry>,
}

#[derive(Debug, Serialize)]
pub struct FitEntry {
    pub form: LawForm,
    #[serde(flatten)]
    pub fit: LawFit,
    pub in_sanity_window: bool,
}

impl<'a> FrontSummary<'a> {
    pub fn new(curve: &'a FrontCurve, fits: &[(LawForm, LawFit)]) -> Self {
        FrontSummary {
            curve,
            monotone: curve.is_monotone(),
            fits: fits
                .iter()
                .map(|&(form, fit)| FitEntry {
                    form,
                    fit,
                    in_sanity_window: fit.in_sanity_window(),
                })
                .collect(),
        }
    }
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Snapshot file name for a tag and a time, e.g. `J_t1.2500.csv`.
pub fn snapshot_name(tag: &str, t: f64) -> String {
    format!("{tag}_t{t:.4}.csv")
}

/// Creates `dir/name` (and `dir`) and hands a buffered writer to `f`.
pub fn write_file(
    dir: &Path,
    name: &str,
    f: impl FnOnce(&mut BufWriter<File>) -> Result<()>,
) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut w = BufWriter::new(File::create(&path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::FrontSource;
    use crate::grid::{HalfPlaneGrid, Quantity};

    #[test]
    fn field_csv_layout() {
        let g = HalfPlaneGrid::new(0.0, 1.0, 1.0, 5, 5).unwrap();
        let f = ScalarField::from_fn(g, 0.5, Quantity::J, |x, theta| x + 10.0 * theta);
        let mut out = Vec::new();
        write_field(&mut out, &f).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x,theta,value,tag");
        assert_eq!(lines[2], "0.5,0.25,0,0.25,J");
        assert_eq!(lines[6], "0.5,0,0.25,2.5,J");
        assert_eq!(lines.len(), 26);
    }

    #[test]
    fn field_round_trip() {
        let g = HalfPlaneGrid::new(-1.0, 2.0, 1.5, 7, 5).unwrap();
        let f = ScalarField::from_fn(g, 0.75, Quantity::W, |x, theta| (x * theta).sin().abs());
        let mut out = Vec::new();
        write_field(&mut out, &f).unwrap();
        let back = read_field(out.as_slice()).unwrap();
        assert_eq!(back.values, f.values);
        assert_eq!((back.time, back.quantity), (0.75, Quantity::W));
        assert_eq!((back.grid.n_x, back.grid.n_theta), (7, 5));
        assert!((back.grid.h_x() - g.h_x()).abs() < 1e-15);
        assert!(read_field("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn mask_lists_nodes() {
        let g = HalfPlaneGrid::new(0.0, 1.0, 2.0, 5, 5).unwrap();
        let m = NodeMask::from_fn(g, |i, j| i == 1 && j == 1);
        let mut out = Vec::new();
        write_mask(&mut out, &m).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "i,j,x,theta\n1,1,0.25,0.5\n");
    }

    #[test]
    fn front_curve_and_fit_rows() {
        let c = FrontCurve::new(vec![(1.0, 2.0)], FrontSource::JZero, 0.0, 1e-9).unwrap();
        let mut out = Vec::new();
        write_front_curve(&mut out, &c).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "t,x_front,source,level\n1,2,j-zero,0\n");
        let fit = LawFit {
            c: 1.5,
            alpha: 1.5,
            log_correction: false,
            residual: 0.0,
        };
        let mut out = Vec::new();
        write_law_fits(&mut out, &[(LawForm::Power, fit)]).unwrap();
        assert!(String::from_utf8(out).unwrap().ends_with("power,1.5,1.5,false,0\n"));
        assert_eq!(snapshot_name("u", 0.25), "u_t0.2500.csv");
    }
}
