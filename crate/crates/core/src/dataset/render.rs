//! One pixel per site: spin up is blue, spin down is yellow. Row `r` of the
//! lattice is image row `r`, column `c` is image column `c`.

use std::io::Cursor;
use std::path::Path;

use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{ImageEncoder, Rgb, RgbImage};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Spin};

pub const SPIN_UP_RGB: [u8; 3] = [31, 119, 180];
pub const SPIN_DOWN_RGB: [u8; 3] = [255, 221, 51];

pub fn render_image(lattice: &Lattice) -> RgbImage {
    RgbImage::from_fn(lattice.cols() as u32, lattice.rows() as u32, |x, y| {
        match lattice.at(y as usize, x as usize) {
            Spin::Up => Rgb(SPIN_UP_RGB),
            Spin::Down => Rgb(SPIN_DOWN_RGB),
        }
    })
}

/// PNG bytes with pinned encoder settings, so equal lattices give equal files.
pub fn encode_png(lattice: &Lattice) -> Result<Vec<u8>> {
    let img = render_image(lattice);
    let mut out = Cursor::new(Vec::new());
    PngEncoder::new_with_quality(&mut out, CompressionType::Default, FilterType::Adaptive).write_image(
        img.as_raw(),
        img.width(),
        img.height(),
        image::ExtendedColorType::Rgb8,
    )?;
    Ok(out.into_inner())
}

pub fn decode_image(img: &RgbImage) -> std::result::Result<Lattice, String> {
    let spins = img
        .pixels()
        .map(|p| match p.0 {
            SPIN_UP_RGB => Ok(Spin::Up),
            SPIN_DOWN_RGB => Ok(Spin::Down),
            other => Err(format!("pixel {other:?} is neither spin colour")),
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Lattice::from_spins(img.height() as usize, img.width() as usize, spins).map_err(|e| e.to_string())
}

pub fn decode_png(bytes: &[u8]) -> std::result::Result<Lattice, String> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| e.to_string())?
        .to_rgb8();
    decode_image(&img)
}

pub fn read_lattice_png(path: &Path) -> Result<Lattice> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_png(&bytes).map_err(|msg| Error::Decode {
        path: path.to_path_buf(),
        msg,
    })
}
