//! The Harder–Narasimhan polygon: cumulative rank/degree points and the
//! per-block vertex set, with CSV and SVG renderings.
//!
//! The polygon through the cumulative points `(R_i, D_i)` (partial sums of
//! ranks and degrees) is strictly concave because its segment slopes are the
//! strictly decreasing `μ_i`. The vertex set `{(r_i, d_i)}` keeps the
//! per-block pairs; both views are exposed since downstream consumers plot
//! the polygon while the pair set is the defining collection.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::data::HNData;
use crate::rational::Rational;

/// Cumulative polygon points and the per-block vertex set of HN data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HNPolygon {
    cumulative: Vec<(u64, Rational)>,
    vertices: Vec<(u64, Rational)>,
}

impl HNPolygon {
    /// Builds the polygon: `ℓ+1` cumulative points starting at the origin,
    /// and one vertex `(r_i, d_i)` per block.
    pub fn from_data(data: &HNData) -> Self {
        let mut cumulative = Vec::with_capacity(data.len() + 1);
        let mut vertices = Vec::with_capacity(data.len());
        let mut rank_acc: u64 = 0;
        let mut degree_acc = Rational::zero();
        cumulative.push((0, Rational::zero()));
        for (slope, &rank) in data.slopes().iter().zip(data.ranks()) {
            let degree = slope * Rational::from_integer(rank.into());
            rank_acc += rank;
            degree_acc += &degree;
            cumulative.push((rank_acc, degree_acc.clone()));
            vertices.push((rank, degree));
        }
        HNPolygon {
            cumulative,
            vertices,
        }
    }

    /// Points `(R_i, D_i)`, `i = 0,…,ℓ`, starting at `(0, 0)`.
    pub fn cumulative_points(&self) -> &[(u64, Rational)] {
        &self.cumulative
    }

    /// Pairs `(r_i, d_i)`, `i = 1,…,ℓ`, in block order.
    pub fn vertex_set(&self) -> &[(u64, Rational)] {
        &self.vertices
    }

    /// Two CSV tables (cumulative points, then the vertex set) separated by
    /// a blank line. Comma separator, LF line endings, rationals rendered as
    /// `p/q` (plain integer when the denominator is one).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("R,D\n");
        for (r, d) in &self.cumulative {
            out.push_str(&format!("{},{}\n", r, d));
        }
        out.push('\n');
        out.push_str("r_i,d_i\n");
        for (r, d) in &self.vertices {
            out.push_str(&format!("{},{}\n", r, d));
        }
        out
    }

    /// Standalone SVG 1.1 document plotting the cumulative polyline with
    /// labeled lattice points.
    ///
    /// Layout maps the rank range and the degree range onto a fixed 800x600
    /// viewport with 10% margins; no plotting dependencies, and identical
    /// input yields byte-identical output.
    pub fn to_svg(&self) -> String {
        const WIDTH: f64 = 800.0;
        const HEIGHT: f64 = 600.0;
        const MARGIN_X: f64 = 80.0;
        const MARGIN_Y: f64 = 60.0;

        let total_rank = self.cumulative.last().expect("polygon is nonempty").0;
        let x_span = if total_rank == 0 { 1.0 } else { total_rank as f64 };
        let d_values: Vec<f64> = self
            .cumulative
            .iter()
            .map(|(_, d)| d.to_f64().unwrap_or(0.0))
            .collect();
        let mut d_min = 0.0f64;
        let mut d_max = 0.0f64;
        for &d in &d_values {
            d_min = d_min.min(d);
            d_max = d_max.max(d);
        }
        if d_max - d_min < 1e-9 {
            d_min -= 1.0;
            d_max += 1.0;
        }
        let x_of = |rank: u64| MARGIN_X + (rank as f64 / x_span) * (WIDTH - 2.0 * MARGIN_X);
        let y_of =
            |d: f64| HEIGHT - MARGIN_Y - (d - d_min) / (d_max - d_min) * (HEIGHT - 2.0 * MARGIN_Y);

        let mut out = String::new();
        out.push_str(&format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
            WIDTH, HEIGHT, WIDTH, HEIGHT
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        // Axis at D = 0 when it lies inside the plotted range.
        if d_min <= 0.0 && d_max >= 0.0 {
            let y0 = y_of(0.0);
            out.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n",
                MARGIN_X,
                y0,
                WIDTH - MARGIN_X,
                y0
            ));
        }
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n",
            MARGIN_X,
            MARGIN_Y,
            MARGIN_X,
            HEIGHT - MARGIN_Y
        ));

        let points: Vec<String> = self
            .cumulative
            .iter()
            .zip(&d_values)
            .map(|((rank, _), &d)| format!("{:.2},{:.2}", x_of(*rank), y_of(d)))
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        for ((rank, degree), &d) in self.cumulative.iter().zip(&d_values) {
            let x = x_of(*rank);
            let y = y_of(d);
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"black\"/>\n",
                x, y
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"14\">({}, {})</text>\n",
                x + 6.0,
                y - 6.0,
                rank,
                degree
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}
