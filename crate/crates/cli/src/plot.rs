//! SVG line plots of sweep CSV columns.

use std::ops::Range;
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use plotters::coord::Shift;
use plotters::prelude::*;

#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    pub y: Vec<String>,
    /// Column dividing x pointwise, e.g. `T_K` for T/T_K.
    pub x_over: Option<String>,
    /// Column dividing every y series pointwise.
    pub y_over: Option<String>,
    pub log_x: bool,
    pub log_y: bool,
    pub title: Option<String>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        Self {
            x: "value".into(),
            y: vec!["kappa_total".into()],
            x_over: None,
            y_over: None,
            log_x: false,
            log_y: false,
            title: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let mut r =
            csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
        let headers = r.headers()?.iter().map(String::from).collect();
        let rows = r.records().collect::<std::result::Result<_, _>>()?;
        Ok(Self { headers, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self
            .headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("missing column {name:?}"))?;
        self.rows
            .iter()
            .map(|r| {
                let s = r.get(i).unwrap_or("");
                s.parse::<f64>()
                    .with_context(|| format!("column {name}: bad number {s:?}"))
            })
            .collect()
    }

    /// The sweep variable named in the first data row, if any.
    fn sweep_var(&self) -> Option<&str> {
        let i = self.headers.iter().position(|h| h == "sweep_var")?;
        self.rows.first()?.get(i)
    }
}

fn unit(column: &str, sweep_var: Option<&str>) -> &'static str {
    match column {
        "value" => match sweep_var {
            Some("T") => "ħω_r/k_B",
            _ => "ħω_r",
        },
        "kappa2" | "kappa4" | "kappa_total" => "k_B ω_r",
        "I_L" | "I_R" => "ħω_r²",
        "omega_10" => "ω_r",
        "T_K" => "ħω_r/k_B",
        _ => "arb.",
    }
}

fn axis_label(column: &str, over: Option<&str>, sweep_var: Option<&str>) -> String {
    let name = match (column, sweep_var) {
        ("value", Some(v)) => v,
        _ => column,
    };
    match over {
        Some(o) => format!("{name}/{o} [dimensionless]"),
        None => format!("{name} [{}]", unit(column, sweep_var)),
    }
}

fn ratio(num: Vec<f64>, den: Option<Vec<f64>>) -> Vec<f64> {
    match den {
        Some(d) => num.iter().zip(d).map(|(a, b)| a / b).collect(),
        None => num,
    }
}

fn range(values: impl Iterator<Item = f64>, log: bool) -> Range<f64> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if log {
        let (lo, hi) = if lo == hi {
            (lo / 2.0, hi * 2.0)
        } else {
            (lo, hi)
        };
        lo / 1.1..hi * 1.1
    } else {
        let pad = if hi > lo {
            0.05 * (hi - lo)
        } else {
            lo.abs().max(1.0) * 0.5
        };
        lo - pad..hi + pad
    }
}

type Series = Vec<(String, Vec<(f64, f64)>)>;

fn draw<X, Y>(
    root: &DrawingArea<SVGBackend<'_>, Shift>,
    series: &Series,
    x: X,
    y: Y,
    labels: (&str, &str),
    title: &str,
) -> Result<()>
where
    X: plotters::coord::ranged1d::AsRangedCoord<Value = f64>,
    Y: plotters::coord::ranged1d::AsRangedCoord<Value = f64>,
    X::CoordDescType: plotters::coord::ranged1d::ValueFormatter<f64>,
    Y::CoordDescType: plotters::coord::ranged1d::ValueFormatter<f64>,
{
    let mut chart = ChartBuilder::on(root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(45)
        .y_label_area_size(80)
        .build_cartesian_2d(x, y)
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .configure_mesh()
        .x_desc(labels.0)
        .y_desc(labels.1)
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    for (k, (name, pts)) in series.iter().enumerate() {
        let color = Palette99::pick(k).to_rgba();
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
            .map_err(|e| anyhow!("{e}"))?
            .label(name.as_str())
            .legend(move |(x, y)| PathElement::new([(x, y), (x + 18, y)], color));
    }
    if series.len() > 1 {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(|e| anyhow!("{e}"))?;
    }
    Ok(())
}

/// Renders the plot to an SVG string.
pub fn render_svg(table: &Table, spec: &PlotSpec) -> Result<String> {
    ensure!(!spec.y.is_empty(), "no y columns requested");
    let x = ratio(
        table.column(&spec.x)?,
        spec.x_over
            .as_deref()
            .map(|c| table.column(c))
            .transpose()?,
    );
    let y_den = spec
        .y_over
        .as_deref()
        .map(|c| table.column(c))
        .transpose()?;
    let keep = |v: f64, log: bool| v.is_finite() && (!log || v > 0.0);
    let mut series: Series = Vec::new();
    for name in &spec.y {
        let y = ratio(table.column(name)?, y_den.clone());
        let pts: Vec<(f64, f64)> = x
            .iter()
            .zip(&y)
            .map(|(&a, &b)| (a, b))
            .filter(|&(a, b)| keep(a, spec.log_x) && keep(b, spec.log_y))
            .collect();
        series.push((name.clone(), pts));
    }
    if series.iter().all(|(_, p)| p.is_empty()) {
        bail!("no plottable data");
    }
    let xr = range(
        series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)),
        spec.log_x,
    );
    let yr = range(
        series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)),
        spec.log_y,
    );

    let sweep_var = table.sweep_var();
    let xl = axis_label(&spec.x, spec.x_over.as_deref(), sweep_var);
    let yl = if spec.y.len() == 1 {
        axis_label(&spec.y[0], spec.y_over.as_deref(), sweep_var)
    } else {
        match spec.y_over.as_deref() {
            Some(o) => format!("series/{o} [dimensionless]"),
            None => format!("[{}]", unit(&spec.y[0], sweep_var)),
        }
    };
    let title = spec.title.clone().unwrap_or_default();

    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (800, 560)).into_drawing_area();
        root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
        let labels = (xl.as_str(), yl.as_str());
        match (spec.log_x, spec.log_y) {
            (false, false) => draw(&root, &series, xr, yr, labels, &title)?,
            (true, false) => draw(&root, &series, xr.log_scale(), yr, labels, &title)?,
            (false, true) => draw(&root, &series, xr, yr.log_scale(), labels, &title)?,
            (true, true) => draw(
                &root,
                &series,
                xr.log_scale(),
                yr.log_scale(),
                labels,
                &title,
            )?,
        }
        root.present().map_err(|e| anyhow!("{e}"))?;
    }
    Ok(svg)
}

/// Reads `csv`, renders and writes `out`. Nothing is written on error.
pub fn emit_plot(csv: &Path, spec: &PlotSpec, out: &Path) -> Result<()> {
    let table = Table::read(csv)?;
    ensure!(!table.is_empty(), "{} has no data rows", csv.display());
    let svg = render_svg(&table, spec)?;
    std::fs::write(out, svg).with_context(|| format!("writing {}", out.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, text: &str) -> std::path::PathBuf {
        let p = dir.join("data.csv");
        std::fs::write(&p, text).unwrap();
        p
    }

    fn series_lines(svg: &str) -> usize {
        svg.lines()
            .filter(|l| l.contains("<polyline") && l.contains(r#"stroke-width="2""#))
            .count()
    }

    const HEAD: &str =
        "sweep_var,value,kappa2,kappa4,kappa_total,I_L,I_R,omega_10,T_K,solver,levels\n";

    fn sample() -> String {
        let mut s = HEAD.to_string();
        for k in 1..=5 {
            let t = 0.1 * k as f64;
            s += &format!("T,{t},{},{},{},0,0,1,1,full,2\n", t * t, t, t * t + t);
        }
        s
    }

    #[test]
    fn single_series_is_one_polyline() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), &sample());
        let out = dir.path().join("p.svg");
        let spec = PlotSpec {
            y: vec!["kappa2".into()],
            ..Default::default()
        };
        emit_plot(&csv, &spec, &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(series_lines(&svg), 1);
        assert!(svg.contains("T [ħω_r/k_B]"));
        assert!(svg.contains("kappa2 [k_B ω_r]"));
    }

    #[test]
    fn normalized_log_axes() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), &sample());
        let out = dir.path().join("p.svg");
        let spec = PlotSpec {
            y: vec!["kappa2".into(), "kappa4".into()],
            x_over: Some("T_K".into()),
            y_over: Some("omega_10".into()),
            log_x: true,
            log_y: true,
            ..Default::default()
        };
        emit_plot(&csv, &spec, &out).unwrap();
        let svg = std::fs::read_to_string(&out).unwrap();
        assert_eq!(series_lines(&svg), 2);
        assert!(svg.contains("T/T_K [dimensionless]"));
    }

    #[test]
    fn empty_data_is_an_error_and_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), HEAD);
        let out = dir.path().join("p.svg");
        assert!(emit_plot(&csv, &PlotSpec::default(), &out).is_err());
        assert!(!out.exists());
    }

    #[test]
    fn missing_column_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let csv = write(dir.path(), &sample());
        let out = dir.path().join("p.svg");
        let spec = PlotSpec {
            y: vec!["heat".into()],
            ..Default::default()
        };
        let err = emit_plot(&csv, &spec, &out).unwrap_err();
        assert!(err.to_string().contains("heat"));
        assert!(!out.exists());
    }
}
