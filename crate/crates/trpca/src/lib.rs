//! File formats, image utilities, experiment reports and the command line
//! for tensor robust PCA. The numerics live in `trpca-core`.

pub mod cli;
pub mod error;
pub mod image;
pub mod ppm;
pub mod report;
pub mod t3f;

pub use error::{FormatError, Result};
pub use image::{corrupt_pixels, psnr, Psnr};
pub use ppm::{image_to_tensor, read_image, tensor_to_image, write_image};
pub use report::{grid_csv, Report};
pub use t3f::{read_tensor, write_tensor};
