//! Minimal static SVG rendering for the three CSV kinds. No dependencies:
//! the files are simple enough that a few rects, lines and texts suffice,
//! and the output is deterministic for identical inputs.

use anyhow::{bail, Context, Result};
use edgekit::harness::{read_cdf_table, read_samples};
use std::fmt::Write as _;
use std::path::Path;

const W: f64 = 640.0;
const H: f64 = 420.0;
const ML: f64 = 62.0; // left margin, leaves room for y labels
const MR: f64 = 18.0;
const MT: f64 = 20.0;
const MB: f64 = 46.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        ML + (v - self.x_min) / (self.x_max - self.x_min) * (W - ML - MR)
    }

    fn y(&self, v: f64) -> f64 {
        // svg y runs downward
        H - MB - (v - self.y_min) / (self.y_max - self.y_min) * (H - MT - MB)
    }
}

fn pad_range(lo: f64, hi: f64) -> (f64, f64) {
    let span = (hi - lo).max(1e-12);
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        r#"<rect x="{ML}" y="{MT}" width="{}" height="{}" fill="none" stroke="dimgray"/>"#,
        W - ML - MR,
        H - MT - MB
    );
    for i in 0..=4 {
        let xv = f.x_min + (f.x_max - f.x_min) * i as f64 / 4.0;
        let yv = f.y_min + (f.y_max - f.y_min) * i as f64 / 4.0;
        let xp = f.x(xv);
        let yp = f.y(yv);
        let _ = write!(
            out,
            r#"<line x1="{xp:.2}" y1="{}" x2="{xp:.2}" y2="{}" stroke="dimgray"/>"#,
            H - MB,
            H - MB + 5.0
        );
        let _ = write!(
            out,
            r#"<text x="{xp:.2}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
            H - MB + 18.0,
            trim(xv)
        );
        let _ = write!(
            out,
            r#"<line x1="{}" y1="{yp:.2}" x2="{ML}" y2="{yp:.2}" stroke="dimgray"/>"#,
            ML - 5.0
        );
        let _ = write!(
            out,
            r#"<text x="{}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            ML - 8.0,
            yp + 4.0,
            trim(yv)
        );
    }
    let _ = write!(
        out,
        r#"<text x="{:.2}" y="{}" font-size="12" text-anchor="middle">{x_label}</text>"#,
        ML + (W - ML - MR) / 2.0,
        H - 8.0
    );
    let _ = write!(
        out,
        r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">{y_label}</text>"#,
        MT + (H - MT - MB) / 2.0,
        MT + (H - MT - MB) / 2.0
    );
}

fn trim(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn document(body: String) -> String {
    format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" "#,
            r#"viewBox="0 0 {w} {h}"><rect width="{w}" height="{h}" fill="white"/>{body}</svg>"#,
            "\n"
        ),
        w = W,
        h = H,
        body = body
    )
}

pub fn render(input: &Path) -> Result<String> {
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    match text.lines().next().unwrap_or_default() {
        "lambda,survival,stderr" => render_cdf(input),
        h if h.starts_with("value_0") => render_histogram(input),
        "a,estimate,stderr,hits,samples,upper95" => render_tails(&text),
        h => bail!("{}: unrecognized header {h:?}", input.display()),
    }
}

fn render_cdf(input: &Path) -> Result<String> {
    let t = read_cdf_table(input)?;
    let (x_min, x_max) = pad_range(t.lambda[0], *t.lambda.last().unwrap());
    let f = Frame { x_min, x_max, y_min: -0.02, y_max: 1.02 };
    let mut body = String::new();
    axes(&mut body, &f, "lambda", "survival");
    // two-sigma whiskers under the curve
    for i in 0..t.lambda.len() {
        let se = t.stderr[i];
        if se > 0.0 {
            let x = f.x(t.lambda[i]);
            let y0 = f.y((t.survival[i] - 2.0 * se).max(0.0));
            let y1 = f.y((t.survival[i] + 2.0 * se).min(1.0));
            let _ = write!(
                body,
                r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="indianred" stroke-width="1"/>"#
            );
        }
    }
    let pts: Vec<String> = t
        .lambda
        .iter()
        .zip(&t.survival)
        .map(|(&l, &s)| format!("{:.2},{:.2}", f.x(l), f.y(s)))
        .collect();
    let _ = write!(
        body,
        r#"<polyline points="{}" fill="none" stroke="midnightblue" stroke-width="1.5"/>"#,
        pts.join(" ")
    );
    Ok(document(body))
}

fn render_histogram(input: &Path) -> Result<String> {
    let rows = read_samples(input)?;
    let vals: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = pad_range(lo, hi);
    let bins = 40usize;
    let mut counts = vec![0usize; bins];
    for &v in &vals {
        let b = (((v - lo) / (hi - lo) * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let top = *counts.iter().max().unwrap() as f64;
    let f = Frame { x_min: lo, x_max: hi, y_min: 0.0, y_max: top * 1.05 };
    let mut body = String::new();
    axes(&mut body, &f, "value_0", "count");
    for (b, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let x0 = f.x(lo + (hi - lo) * b as f64 / bins as f64);
        let x1 = f.x(lo + (hi - lo) * (b + 1) as f64 / bins as f64);
        let y = f.y(c as f64);
        let _ = write!(
            body,
            r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="mediumseagreen" stroke="darkslategray"/>"#,
            x1 - x0,
            (H - MB) - y
        );
    }
    Ok(document(body))
}

fn render_tails(text: &str) -> Result<String> {
    let mut rows = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.is_empty()) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            bail!("tails row needs 6 columns");
        }
        let a: f64 = cols[0].parse()?;
        let est: f64 = cols[1].parse()?;
        let up: f64 = cols[5].parse()?;
        rows.push((a, est, up));
    }
    if rows.is_empty() {
        bail!("no tail rows");
    }
    let (x_min, x_max) = pad_range(rows[0].0, rows.last().unwrap().0);
    let y_top = rows.iter().map(|r| r.2).fold(0.0f64, f64::max);
    let f = Frame { x_min, x_max, y_min: 0.0, y_max: (y_top * 1.1).max(1e-12) };
    let mut body = String::new();
    axes(&mut body, &f, "offset a", "probability");
    for &(a, est, up) in &rows {
        let x = f.x(a);
        let _ = write!(
            body,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="indianred"/>"#,
            f.y(est),
            f.y(up)
        );
        let _ = write!(
            body,
            r#"<circle cx="{x:.2}" cy="{:.2}" r="3" fill="midnightblue"/>"#,
            f.y(est)
        );
    }
    Ok(document(body))
}
