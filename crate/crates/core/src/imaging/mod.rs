//! Preprocessing and global color / texture / shape feature extraction.

mod buffer;
pub mod color;
mod normalize;
mod preprocess;
pub mod shape;
pub mod texture;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use buffer::ImageBuffer;
pub use color::color_features;
pub use normalize::Normalizer;
pub use preprocess::{luma, preprocess, resize, to_gray};
pub use shape::{shape_features, zernike_moment, ZernikeOrder};
pub use texture::SteerableFilter;

use crate::error::{Error, Result};

/// Number of fused features with the default configuration (48 + 8 + 4).
pub const FEATURE_DIM: usize = 60;
pub const TEXTURE_DIM: usize = 2 * texture::ORIENTATIONS_DEG.len();

/// Replaceable feature-extraction parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub resize_width: usize,
    pub resize_height: usize,
    pub grid_cols: usize,
    pub grid_rows: usize,
    pub filter_sigma: f64,
    pub filter_size: usize,
    pub zernike_orders: Vec<ZernikeOrder>,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            resize_width: 200,
            resize_height: 200,
            grid_cols: 4,
            grid_rows: 2,
            filter_sigma: 1.0,
            filter_size: 7,
            zernike_orders: vec![ZernikeOrder { n: 2, m: 0 }, ZernikeOrder { n: 2, m: 2 }],
        }
    }
}

impl FeatureConfig {
    pub fn color_dim(&self) -> usize {
        self.grid_cols * self.grid_rows * 6
    }

    pub fn shape_dim(&self) -> usize {
        2 * self.zernike_orders.len()
    }

    pub fn dim(&self) -> usize {
        self.color_dim() + TEXTURE_DIM + self.shape_dim()
    }

    pub fn validate(&self) -> Result<()> {
        if self.resize_width == 0 || self.resize_height == 0 {
            return Err(Error::Config("resize dimensions must be positive".into()));
        }
        if self.grid_cols == 0
            || self.grid_rows == 0
            || self.grid_cols > self.resize_width
            || self.grid_rows > self.resize_height
        {
            return Err(Error::Config(format!(
                "block grid {}x{} does not fit a {}x{} image",
                self.grid_cols, self.grid_rows, self.resize_width, self.resize_height
            )));
        }
        if !(self.filter_sigma > 0.0 && self.filter_sigma.is_finite()) {
            return Err(Error::Config("filter_sigma must be positive".into()));
        }
        if self.filter_size.is_multiple_of(2) {
            return Err(Error::Config("filter_size must be odd".into()));
        }
        for o in &self.zernike_orders {
            ZernikeOrder::new(o.n, o.m).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

/// Fused, un-normalized feature vector: color, then texture, then shape.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct FeatureExtractor {
    config: FeatureConfig,
    filter: SteerableFilter,
}

impl FeatureExtractor {
    pub fn new(config: FeatureConfig) -> Result<Self> {
        config.validate()?;
        let filter = SteerableFilter::new(config.filter_sigma, config.filter_size);
        Ok(Self { config, filter })
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.config.dim()
    }

    pub fn preprocess(&self, image: &ImageBuffer) -> Result<(ImageBuffer, ImageBuffer)> {
        preprocess(image, self.config.resize_width, self.config.resize_height)
    }

    pub fn color(&self, rgb: &ImageBuffer) -> Vec<f64> {
        color_features(rgb, self.config.grid_cols, self.config.grid_rows)
    }

    pub fn texture(&self, gray: &ImageBuffer) -> Vec<f64> {
        self.filter.features(gray)
    }

    pub fn shape(&self, gray: &ImageBuffer) -> Vec<f64> {
        shape_features(gray, &self.config.zernike_orders)
    }

    /// Fuse features of an already preprocessed RGB / gray pair.
    pub fn extract(&self, rgb: &ImageBuffer, gray: &ImageBuffer) -> Result<FeatureVector> {
        if rgb.channels() != 3 || gray.channels() != 1 {
            return Err(Error::InvalidImage(
                "extract expects an RGB image and its grayscale companion".into(),
            ));
        }
        if (rgb.width(), rgb.height()) != (gray.width(), gray.height()) {
            return Err(Error::InvalidImage(
                "RGB and gray images differ in size".into(),
            ));
        }
        let mut values = self.color(rgb);
        values.extend(self.texture(gray));
        values.extend(self.shape(gray));
        debug_assert_eq!(values.len(), self.dim());
        if let Some(col) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col });
        }
        Ok(FeatureVector(values))
    }

    /// Preprocess a raw RGB image and extract its features.
    pub fn extract_image(&self, image: &ImageBuffer) -> Result<FeatureVector> {
        let (rgb, gray) = self.preprocess(image)?;
        self.extract(&rgb, &gray)
    }

    pub fn extract_path(&self, path: &Path) -> Result<FeatureVector> {
        self.extract_image(&load_image(path)?)
    }
}

impl Default for FeatureExtractor {
    fn default() -> Self {
        Self::new(FeatureConfig::default()).expect("default config is valid")
    }
}

/// Decode a PNG or JPEG file into an RGB buffer.
pub fn load_image(path: &Path) -> Result<ImageBuffer> {
    let img = image::ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()?;
    ImageBuffer::try_from(img.to_rgb8())
}

pub fn save_png(image: &ImageBuffer, path: &Path) -> Result<()> {
    let color = if image.channels() == 3 {
        image::ExtendedColorType::Rgb8
    } else {
        image::ExtendedColorType::L8
    };
    image::save_buffer_with_format(
        path,
        image.pixels(),
        image.width() as u32,
        image.height() as u32,
        color,
        image::ImageFormat::Png,
    )?;
    Ok(())
}
