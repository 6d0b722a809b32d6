//! Grouped bar charts of mean test error per alphabet size and method.
//!
//! Bars show the mean test error over seeds; the dark tick inside each bar
//! marks the mean training error.

use std::fmt::Write;

use crate::experiments::Method;
use crate::report::SummaryRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 48.0;

fn color(m: Method) -> &'static str {
    match m {
        Method::Baseline => "#9e9e9e",
        Method::OneStep => "#1f77b4",
        Method::TwoStep => "#ff7f0e",
    }
}

pub fn bar_csv(rows: &[&SummaryRow]) -> String {
    let mut out =
        String::from("dataset,alpha,method,seeds,mean_train_error,mean_test_error,mean_gap\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.dataset,
            r.alpha,
            r.method,
            r.seeds,
            r.train_error.mean,
            r.test_error.mean,
            r.gap.mean
        );
    }
    out
}

pub fn bar_svg(title: &str, rows: &[&SummaryRow]) -> String {
    let mut alphas: Vec<usize> = rows.iter().map(|r| r.alpha).collect();
    alphas.sort_unstable();
    alphas.dedup();

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let top_value = rows
        .iter()
        .flat_map(|r| [r.test_error.mean, r.train_error.mean])
        .fold(0.0f64, f64::max);
    // round the axis up to the next tenth, at least 0.1
    let y_max = ((top_value * 10.0).ceil() / 10.0).max(0.1);
    let y = |v: f64| TOP + plot_h * (1.0 - v / y_max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{} - classification error</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let yy = y(v);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#e0e0e0"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            LEFT - 6.0,
            yy + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );

    let group_w = plot_w / alphas.len().max(1) as f64;
    let bar_w = group_w * 0.8 / Method::ALL.len() as f64;
    for (g, &alpha) in alphas.iter().enumerate() {
        let gx = LEFT + g as f64 * group_w + group_w * 0.1;
        for (k, m) in Method::ALL.iter().enumerate() {
            let Some(r) = rows.iter().find(|r| r.alpha == alpha && r.method == *m) else {
                continue;
            };
            let x = gx + k as f64 * bar_w;
            let top = y(r.test_error.mean);
            let _ = writeln!(
                s,
                r#"<rect x="{x:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>{} alpha={} test={:.4} train={:.4}</title></rect>"#,
                bar_w * 0.9,
                (TOP + plot_h - top).max(0.0),
                color(*m),
                m,
                alpha,
                r.test_error.mean,
                r.train_error.mean
            );
            let ty = y(r.train_error.mean);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="black" stroke-width="2"/>"#,
                x + bar_w * 0.9
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">&#945; = {alpha}</text>"#,
            gx + group_w * 0.4,
            TOP + plot_h + 18.0
        );
    }

    let lx = WIDTH - RIGHT + 14.0;
    for (k, m) in Method::ALL.iter().enumerate() {
        let ly = TOP + 10.0 + k as f64 * 20.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx}" y="{:.2}" width="12" height="12" fill="{}"/><text x="{}" y="{:.2}">{m}</text>"#,
            ly - 10.0,
            color(*m),
            lx + 18.0,
            ly
        );
    }
    let ly = TOP + 10.0 + Method::ALL.len() as f64 * 20.0;
    let _ = writeln!(
        s,
        r#"<line x1="{lx}" y1="{:.2}" x2="{}" y2="{:.2}" stroke="black" stroke-width="2"/><text x="{}" y="{ly:.2}">train</text>"#,
        ly - 4.0,
        lx + 12.0,
        ly - 4.0,
        lx + 18.0
    );
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
