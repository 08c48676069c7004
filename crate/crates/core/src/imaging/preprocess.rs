use image::imageops::{self, FilterType};

use super::ImageBuffer;
use crate::error::{Error, Result};

const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Resize an RGB image to `width` x `height` (bilinear) and derive its
/// grayscale companion.
pub fn preprocess(
    image: &ImageBuffer,
    width: usize,
    height: usize,
) -> Result<(ImageBuffer, ImageBuffer)> {
    if image.channels() != 3 {
        return Err(Error::InvalidImage(format!(
            "expected 3 channels, got {}",
            image.channels()
        )));
    }
    if image.is_empty() {
        return Err(Error::InvalidImage(format!(
            "zero-sized image {}x{}",
            image.width(),
            image.height()
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(format!(
            "target size {width}x{height} must be positive"
        )));
    }
    let rgb = resize(image, width, height)?;
    let gray = to_gray(&rgb);
    Ok((rgb, gray))
}

pub fn resize(image: &ImageBuffer, width: usize, height: usize) -> Result<ImageBuffer> {
    if image.width() == width && image.height() == height {
        return Ok(image.clone());
    }
    let src = image.to_rgb_image()?;
    let out = imageops::resize(&src, width as u32, height as u32, FilterType::Triangle);
    ImageBuffer::try_from(out)
}

pub fn to_gray(rgb: &ImageBuffer) -> ImageBuffer {
    if rgb.channels() == 1 {
        return rgb.clone();
    }
    ImageBuffer::from_fn_gray(rgb.width(), rgb.height(), |x, y| {
        luma(rgb.get(x, y, 0), rgb.get(x, y, 1), rgb.get(x, y, 2))
    })
}

#[inline]
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let v = LUMA_R * f64::from(r) + LUMA_G * f64::from(g) + LUMA_B * f64::from(b);
    v.round().clamp(0.0, 255.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_upscales_to_white() {
        let img = ImageBuffer::filled(100, 50, &[255, 255, 255]).unwrap();
        let (rgb, gray) = preprocess(&img, 200, 200).unwrap();
        assert_eq!(
            (gray.width(), gray.height(), gray.channels()),
            (200, 200, 1)
        );
        assert_eq!((rgb.width(), rgb.height(), rgb.channels()), (200, 200, 3));
        assert!(gray.pixels().iter().all(|&p| p == 255));
    }

    #[test]
    fn pure_red_gray_level() {
        // 0.299 * 255 = 76.245
        let expected = (0.299f64 * 255.0).round() as u8;
        assert_eq!(expected, 76);
        let img = ImageBuffer::filled(37, 91, &[255, 0, 0]).unwrap();
        let (_, gray) = preprocess(&img, 200, 200).unwrap();
        assert!(gray.pixels().iter().all(|&p| p == 76));
    }

    #[test]
    fn same_size_and_constant_images_are_preserved() {
        let img = ImageBuffer::from_fn_rgb(200, 200, |x, y| [(x % 256) as u8, (y % 7) as u8, 3]);
        let (rgb, _) = preprocess(&img, 200, 200).unwrap();
        assert_eq!(rgb, img);

        let flat = ImageBuffer::filled(333, 120, &[17, 200, 90]).unwrap();
        let (rgb, _) = preprocess(&flat, 200, 200).unwrap();
        assert!(rgb.pixels().chunks(3).all(|p| p == [17, 200, 90]));
    }

    #[test]
    fn zero_dimension_is_invalid() {
        let img = ImageBuffer::new(0, 10, 3, vec![]).unwrap();
        assert!(matches!(
            preprocess(&img, 200, 200),
            Err(Error::InvalidImage(_))
        ));
        let gray = ImageBuffer::filled(4, 4, &[1]).unwrap();
        assert!(matches!(
            preprocess(&gray, 200, 200),
            Err(Error::InvalidImage(_))
        ));
    }
}
