//! CSV, OBJ and SVG writers and the matching readers.
//!
//! Every number is written as `{:.16e}` (17 significant digits), so output
//! is byte-for-byte reproducible and re-parses to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{reconstruct_point, PlanePoint, SpacePoint};
use crate::mesh::SurfaceMesh;
use crate::ode::GeneratingCurve;
use crate::scalar::Real;

pub const CSV_HEADER: &str = "s,tau,nu,theta,k,x,y";

/// Fixed 17-significant-digit formatting.
pub fn fmt_real<T: Real>(x: T) -> String {
    format!("{:.16e}", x)
}

/// Writes `contents` to a sibling temporary file and renames it into place,
/// so `path` never holds partial output.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}

/// One CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub s: f64,
    pub tau: f64,
    pub nu: f64,
    pub theta: f64,
    pub k: f64,
    pub x: f64,
    pub y: f64,
}

pub fn curve_to_csv<T: Real>(curve: &GeneratingCurve<T>) -> String {
    let mut out = String::with_capacity(curve.len() * 170 + 32);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for st in curve.states() {
        let p = reconstruct_point(st);
        let fields = [st.s, st.tau, st.nu, st.theta, st.k, p.x, p.y].map(fmt_real);
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn export_csv<T: Real>(curve: &GeneratingCurve<T>, path: &Path) -> Result<()> {
    write_atomic(path, &curve_to_csv(curve))
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("not a number: {:?}", tok),
    })
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header {:?}", CSV_HEADER),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let vals = line
            .split(',')
            .map(|t| parse_f64(t, i + 1))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != 7 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected 7 fields, found {}", vals.len()),
            });
        }
        rows.push(CsvRow {
            s: vals[0],
            tau: vals[1],
            nu: vals[2],
            theta: vals[3],
            k: vals[4],
            x: vals[5],
            y: vals[6],
        });
    }
    Ok(rows)
}

/// Vertices, normals and 1-based `f a//a b//b c//c` faces.
pub fn mesh_to_obj<T: Real>(mesh: &SurfaceMesh<T>) -> String {
    let mut out = String::with_capacity(mesh.vertices.len() * 160 + mesh.triangles.len() * 40);
    let _ = writeln!(out, "# helicoidal surface: {}", mesh.family);
    for (k, v) in &mesh.params {
        let _ = writeln!(out, "# {} = {}", k, fmt_real(*v));
    }
    let _ = writeln!(out, "# grid {} x {}", mesh.n_s, mesh.n_t);
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", fmt_real(v.x), fmt_real(v.y), fmt_real(v.z));
    }
    for n in &mesh.normals {
        let _ = writeln!(out, "vn {} {} {}", fmt_real(n.x), fmt_real(n.y), fmt_real(n.z));
    }
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| i + 1);
        let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
    }
    out
}

pub fn export_obj<T: Real>(mesh: &SurfaceMesh<T>, path: &Path) -> Result<()> {
    write_atomic(path, &mesh_to_obj(mesh))
}

/// Contents of an OBJ file; faces are 0-based vertex indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjData {
    pub vertices: Vec<SpacePoint<f64>>,
    pub normals: Vec<SpacePoint<f64>>,
    pub faces: Vec<[usize; 3]>,
}

pub fn parse_obj(text: &str) -> Result<ObjData> {
    let mut data = ObjData::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut toks = line.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        let rest: Vec<&str> = toks.collect();
        let xyz = |rest: &[&str]| -> Result<SpacePoint<f64>> {
            if rest.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected three coordinates".into(),
                });
            }
            Ok(SpacePoint::new(
                parse_f64(rest[0], line_no)?,
                parse_f64(rest[1], line_no)?,
                parse_f64(rest[2], line_no)?,
            ))
        };
        match tag {
            "v" => data.vertices.push(xyz(&rest)?),
            "vn" => data.normals.push(xyz(&rest)?),
            "f" => {
                if rest.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "only triangles are supported".into(),
                    });
                }
                let mut face = [0usize; 3];
                for (slot, tok) in face.iter_mut().zip(&rest) {
                    let idx = tok.split('/').next().unwrap_or("");
                    let v: usize = idx.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("bad face index {:?}", tok),
                    })?;
                    if v == 0 || v > data.vertices.len() {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("face index {} out of range", v),
                        });
                    }
                    *slot = v - 1;
                }
                data.faces.push(face);
            }
            _ if tag.starts_with('#') => {}
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown record {:?}", other),
                })
            }
        }
    }
    Ok(data)
}

/// Appearance of an SVG plot.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    /// Width and height of the image in pixels.
    pub size: f64,
    pub stroke_width: f64,
    pub stroke: String,
    /// Fraction of the extent added on each side of the view box.
    pub margin: f64,
    pub origin_marker: bool,
    /// Radii of dashed reference circles about the origin.
    pub circles: Vec<f64>,
    /// Scale every curve so its largest distance to the origin is 1.
    pub normalize: bool,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            size: 600.0,
            stroke_width: 1.5,
            stroke: "black".into(),
            margin: 0.05,
            origin_marker: false,
            circles: Vec::new(),
            normalize: false,
        }
    }
}

/// SVG 1.1 document with one `<polyline>` per curve. The y axis is flipped
/// so the plot shows the usual mathematical orientation.
pub fn curves_to_svg<T: Real>(curves: &[Vec<PlanePoint<T>>], style: &SvgStyle) -> String {
    let curves: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .map(|c| {
            let pts: Vec<(f64, f64)> = c.iter().map(|p| (p.x.as_f64(), p.y.as_f64())).collect();
            let scale = if style.normalize {
                let r = pts.iter().fold(0.0f64, |m, &(x, y)| m.max(x.hypot(y)));
                if r > 0.0 {
                    r.recip()
                } else {
                    1.0
                }
            } else {
                1.0
            };
            pts.into_iter().map(|(x, y)| (x * scale, -y * scale)).collect()
        })
        .collect();

    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut include = |x: f64, y: f64| {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    };
    for &(x, y) in curves.iter().flatten() {
        include(x, y);
    }
    for &r in &style.circles {
        include(-r, -r);
        include(r, r);
    }
    if style.origin_marker {
        include(0.0, 0.0);
    }
    if !lo.0.is_finite() {
        lo = (-1.0, -1.0);
        hi = (1.0, 1.0);
    }
    let extent = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-12);
    let pad = extent * style.margin;
    let (vx, vy) = (lo.0 - pad, lo.1 - pad);
    let (vw, vh) = (hi.0 - lo.0 + 2.0 * pad, hi.1 - lo.1 + 2.0 * pad);
    let stroke = style.stroke_width * extent / style.size;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        style.size,
        style.size,
        fmt_real(vx),
        fmt_real(vy),
        fmt_real(vw),
        fmt_real(vh)
    );
    for &r in &style.circles {
        let _ = writeln!(
            out,
            "  <circle cx=\"0\" cy=\"0\" r=\"{}\" fill=\"none\" stroke=\"gray\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>",
            fmt_real(r),
            fmt_real(stroke * 0.5),
            fmt_real(stroke * 4.0),
            fmt_real(stroke * 4.0)
        );
    }
    if style.origin_marker {
        let _ = writeln!(out, "  <circle cx=\"0\" cy=\"0\" r=\"{}\" fill=\"red\"/>", fmt_real(stroke * 2.0));
    }
    for c in &curves {
        out.push_str("  <polyline fill=\"none\" stroke=\"");
        out.push_str(&style.stroke);
        let _ = write!(out, "\" stroke-width=\"{}\" points=\"", fmt_real(stroke));
        for (i, &(x, y)) in c.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{},{}", fmt_real(x), fmt_real(y));
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</svg>\n");
    out
}

pub fn export_svg<T: Real>(curves: &[Vec<PlanePoint<T>>], style: &SvgStyle, path: &Path) -> Result<()> {
    write_atomic(path, &curves_to_svg(curves, style))
}

/// Points of every `<polyline>` in a document produced by [`curves_to_svg`],
/// in SVG coordinates (y pointing down).
pub fn parse_svg_polylines(text: &str) -> Result<Vec<Vec<(f64, f64)>>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if !line.trim_start().starts_with("<polyline") {
            continue;
        }
        let start = line.find("points=\"").ok_or_else(|| Error::Parse {
            line: i + 1,
            message: "polyline without points".into(),
        })? + 8;
        let end = start
            + line[start..].find('"').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "unterminated points attribute".into(),
            })?;
        let pts = line[start..end]
            .split_whitespace()
            .map(|pair| {
                let (x, y) = pair.split_once(',').ok_or_else(|| Error::Parse {
                    line: i + 1,
                    message: format!("bad point {:?}", pair),
                })?;
                Ok((parse_f64(x, i + 1)?, parse_f64(y, i + 1)?))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(pts);
    }
    Ok(out)
}
