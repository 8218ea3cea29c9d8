//! PNG reading and writing for 8-bit grayscale and RGB images.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use png::{BitDepth, ColorType};
use veridoc_core::imgproc::{to_grayscale, GrayImage, RasterImage};

use crate::{Error, Result};

/// Read a PNG as RGB; grayscale files replicate their channel, which the
/// BT.601 conversion maps back to the identical luminance.
pub fn read_png_rgb(path: &Path) -> Result<RasterImage> {
    let (width, height, color, data) = read_raw(path)?;
    let pixels = match color {
        ColorType::Rgb => data,
        ColorType::Grayscale => data.iter().flat_map(|&v| [v, v, v]).collect(),
        other => {
            return Err(Error::UnsupportedPng {
                path: path.to_path_buf(),
                detail: format!("{other:?}"),
            })
        }
    };
    RasterImage::from_raw(width, height, pixels).map_err(Into::into)
}

/// Read a PNG as grayscale; RGB files are converted through BT.601.
pub fn read_png_gray(path: &Path) -> Result<GrayImage> {
    let (width, height, color, data) = read_raw(path)?;
    match color {
        ColorType::Grayscale => GrayImage::from_raw(width, height, data).map_err(Into::into),
        ColorType::Rgb => {
            let rgb = RasterImage::from_raw(width, height, data)?;
            Ok(to_grayscale(&rgb))
        }
        other => Err(Error::UnsupportedPng {
            path: path.to_path_buf(),
            detail: format!("{other:?}"),
        }),
    }
}

fn read_raw(path: &Path) -> Result<(u32, u32, ColorType, Vec<u8>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let decoder = png::Decoder::new(BufReader::new(file));
    let mut reader = decoder.read_info().map_err(|e| Error::PngDecode {
        path: path.to_path_buf(),
        source: e,
    })?;
    let (color, depth) = reader.output_color_type();
    if depth != BitDepth::Eight {
        return Err(Error::UnsupportedPng {
            path: path.to_path_buf(),
            detail: format!("bit depth {depth:?}"),
        });
    }
    let mut buf = vec![0; reader.output_buffer_size().unwrap_or_default()];
    let info = reader.next_frame(&mut buf).map_err(|e| Error::PngDecode {
        path: path.to_path_buf(),
        source: e,
    })?;
    buf.truncate(info.buffer_size());
    Ok((info.width, info.height, color, buf))
}

pub fn write_png_gray(path: &Path, img: &GrayImage) -> Result<()> {
    write_raw(
        path,
        img.width(),
        img.height(),
        ColorType::Grayscale,
        img.pixels(),
    )
}

pub fn write_png_rgb(path: &Path, img: &RasterImage) -> Result<()> {
    write_raw(path, img.width(), img.height(), ColorType::Rgb, img.pixels())
}

fn write_raw(path: &Path, width: u32, height: u32, color: ColorType, data: &[u8]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), width, height);
    encoder.set_color(color);
    encoder.set_depth(BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(|e| Error::PngEncode {
        path: path.to_path_buf(),
        source: e,
    })?;
    writer.write_image_data(data).map_err(|e| Error::PngEncode {
        path: path.to_path_buf(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_roundtrip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.png");
        let img = GrayImage::from_fn(17, 9, |x, y| (x * 13 + y * 29) as u8);
        write_png_gray(&path, &img).unwrap();
        assert_eq!(read_png_gray(&path).unwrap(), img);
    }

    #[test]
    fn rgb_roundtrip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.png");
        let img = RasterImage::from_fn(5, 4, |x, y| [x as u8, y as u8, (x + y) as u8]);
        write_png_rgb(&path, &img).unwrap();
        assert_eq!(read_png_rgb(&path).unwrap(), img);
    }

    #[test]
    fn gray_file_read_as_rgb_replicates_channels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.png");
        let img = GrayImage::from_fn(4, 4, |x, y| (x * 60 + y) as u8);
        write_png_gray(&path, &img).unwrap();
        let rgb = read_png_rgb(&path).unwrap();
        assert_eq!(rgb.rgb(2, 3), [123, 123, 123]);
        assert_eq!(to_grayscale(&rgb), img);
    }

    #[test]
    fn missing_file_reports_the_path() {
        let err = read_png_gray(Path::new("/nonexistent/x.png")).unwrap_err();
        assert!(err.to_string().contains("x.png"));
    }
}
