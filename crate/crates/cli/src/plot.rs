//! Bare line chart of magnetization per spin against sweep: axes, a few
//! reference lines at m = -1, -0.5, 0, 0.5, 1, and the series. No text.

use image::codecs::png::PngEncoder;
use image::{ImageEncoder, Rgb, RgbImage};
use ising_core::metropolis::TracePoint;

use crate::error::CliError;

const WIDTH: u32 = 800;
const HEIGHT: u32 = 400;
const MARGIN: u32 = 30;

const BACKGROUND: Rgb<u8> = Rgb([255, 255, 255]);
const AXIS: Rgb<u8> = Rgb([40, 40, 40]);
const GRID: Rgb<u8> = Rgb([215, 215, 215]);
const SERIES: Rgb<u8> = Rgb([31, 119, 180]);

fn line(img: &mut RgbImage, (x0, y0): (i64, i64), (x1, y1): (i64, i64), color: Rgb<u8>) {
    let (dx, dy) = ((x1 - x0).abs(), -(y1 - y0).abs());
    let (sx, sy) = (if x0 < x1 { 1 } else { -1 }, if y0 < y1 { 1 } else { -1 });
    let (mut x, mut y, mut err) = (x0, y0, dx + dy);
    loop {
        if x >= 0 && y >= 0 && (x as u32) < img.width() && (y as u32) < img.height() {
            img.put_pixel(x as u32, y as u32, color);
        }
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

pub fn plot_magnetization(trace: &[TracePoint]) -> Result<Vec<u8>, CliError> {
    let mut img = RgbImage::from_pixel(WIDTH, HEIGHT, BACKGROUND);
    let (left, right) = (MARGIN as f64, (WIDTH - MARGIN) as f64);
    let (top, bottom) = (MARGIN as f64, (HEIGHT - MARGIN) as f64);
    let y_of = |m: f64| (bottom - (m.clamp(-1.0, 1.0) + 1.0) / 2.0 * (bottom - top)).round() as i64;
    for m in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        line(&mut img, (left as i64, y_of(m)), (right as i64, y_of(m)), GRID);
    }
    line(&mut img, (left as i64, top as i64), (left as i64, bottom as i64), AXIS);
    line(&mut img, (left as i64, bottom as i64), (right as i64, bottom as i64), AXIS);

    let max_sweep = trace.iter().map(|p| p.sweep).max().unwrap_or(1).max(1) as f64;
    let x_of = |s: usize| (left + s as f64 / max_sweep * (right - left)).round() as i64;
    let points: Vec<(i64, i64)> = trace.iter().map(|p| (x_of(p.sweep), y_of(p.magnetization_per_spin))).collect();
    for w in points.windows(2) {
        line(&mut img, w[0], w[1], SERIES);
    }
    if let [only] = points[..] {
        line(&mut img, only, only, SERIES);
    }

    let mut png = Vec::new();
    PngEncoder::new(&mut png)
        .write_image(img.as_raw(), WIDTH, HEIGHT, image::ExtendedColorType::Rgb8)
        .map_err(|e| CliError::Io(format!("plot: {e}")))?;
    Ok(png)
}
