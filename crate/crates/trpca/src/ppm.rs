//! Binary PPM (P6, maxval 255) images as `height × width × 3` tensors.
//!
//! Channel `c` becomes frontal slice `c` and samples are scaled to `[0, 1]`.

use std::fs;
use std::path::Path;

use trpca_core::Tensor3;

use crate::error::{FormatError, Result};

struct Header {
    width: usize,
    height: usize,
    data_start: usize,
}

fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

/// Skips whitespace and `#` comments, then reads one decimal field.
fn header_field(bytes: &[u8], pos: &mut usize, name: &str) -> Result<usize> {
    loop {
        match bytes.get(*pos) {
            Some(&b) if is_space(b) => *pos += 1,
            Some(b'#') => {
                while let Some(&b) = bytes.get(*pos) {
                    *pos += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            }
            _ => break,
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    if start == *pos {
        return Err(FormatError::MalformedHeader(format!("missing {name}")));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .unwrap()
        .parse()
        .map_err(|_| FormatError::MalformedHeader(format!("{name} out of range")))
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    match bytes.get(..2) {
        Some(b"P6") => {}
        Some(m) if m[0] == b'P' => {
            return Err(FormatError::UnsupportedFormat(format!(
                "netpbm variant {}, only binary P6 is supported",
                String::from_utf8_lossy(m)
            )))
        }
        _ => return Err(FormatError::UnsupportedFormat("not a PPM file".into())),
    }
    let mut pos = 2;
    if !bytes.get(pos).copied().is_some_and(|b| is_space(b) || b == b'#') {
        return Err(FormatError::MalformedHeader("no separator after magic".into()));
    }
    let width = header_field(bytes, &mut pos, "width")?;
    let height = header_field(bytes, &mut pos, "height")?;
    let maxval = header_field(bytes, &mut pos, "maxval")?;
    if width == 0 || height == 0 {
        return Err(FormatError::MalformedHeader("zero image dimension".into()));
    }
    if maxval != 255 {
        return Err(FormatError::UnsupportedFormat(format!(
            "maxval {maxval}, only 8-bit (255) is supported"
        )));
    }
    match bytes.get(pos) {
        Some(&b) if is_space(b) => pos += 1,
        _ => return Err(FormatError::MalformedHeader("no separator before pixel data".into())),
    }
    Ok(Header { width, height, data_start: pos })
}

pub fn image_to_tensor(bytes: &[u8]) -> Result<Tensor3> {
    let h = parse_header(bytes)?;
    let expected = h
        .width
        .checked_mul(h.height)
        .and_then(|v| v.checked_mul(3))
        .ok_or_else(|| FormatError::MalformedHeader("image too large".into()))?;
    let pixels = &bytes[h.data_start..];
    if pixels.len() < expected {
        return Err(FormatError::Truncated { expected, found: pixels.len() });
    }
    if pixels.len() > expected {
        return Err(FormatError::TrailingBytes { extra: pixels.len() - expected });
    }
    let (n1, n2) = (h.height, h.width);
    Ok(Tensor3::from_fn(n1, n2, 3, |i, j, c| {
        pixels[(i * n2 + j) * 3 + c] as f64 / 255.0
    }))
}

/// `v ↦ ⌊255·clamp(v, 0, 1) + ½⌋`.
pub fn quantize(v: f64) -> u8 {
    (255.0 * v.clamp(0.0, 1.0) + 0.5).floor() as u8
}

pub fn tensor_to_image(a: &Tensor3) -> Result<Vec<u8>> {
    let (n1, n2, n3) = a.dims();
    if n3 != 3 || n1 == 0 || n2 == 0 {
        return Err(FormatError::ShapeMismatch(format!(
            "an image needs an n1 x n2 x 3 tensor, got {n1}x{n2}x{n3}"
        )));
    }
    let mut out = format!("P6\n{n2} {n1}\n255\n").into_bytes();
    out.reserve(n1 * n2 * 3);
    for i in 0..n1 {
        for j in 0..n2 {
            for c in 0..3 {
                out.push(quantize(a.get(i, j, c)));
            }
        }
    }
    Ok(out)
}

pub fn read_image(path: impl AsRef<Path>) -> Result<Tensor3> {
    image_to_tensor(&fs::read(path)?)
}

pub fn write_image(path: impl AsRef<Path>, a: &Tensor3) -> Result<()> {
    fs::write(path, tensor_to_image(a)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_with_comments() {
        let mut bytes = b"P6 # made by hand\n2 1\n# depth\n255\n".to_vec();
        bytes.extend_from_slice(&[255, 0, 0, 0, 0, 255]);
        let t = image_to_tensor(&bytes).unwrap();
        assert_eq!(t.dims(), (1, 2, 3));
        assert_eq!(t.get(0, 0, 0), 1.0);
        assert_eq!(t.get(0, 1, 2), 1.0);
        assert_eq!(t.get(0, 1, 0), 0.0);
    }

    #[test]
    fn quantize_rounds_half_up_and_clamps() {
        assert_eq!(quantize(0.5), 128);
        assert_eq!(quantize(1.5), 255);
        assert_eq!(quantize(-0.2), 0);
        assert_eq!(quantize(1.0 / 255.0), 1);
    }

    #[test]
    fn other_formats() {
        assert!(matches!(image_to_tensor(b"P3\n1 1\n255\n0 0 0\n"), Err(FormatError::UnsupportedFormat(_))));
        assert!(matches!(image_to_tensor(b"GIF89a"), Err(FormatError::UnsupportedFormat(_))));
        assert!(matches!(image_to_tensor(b"P6\n1 1\n65535\n"), Err(FormatError::UnsupportedFormat(_))));
        assert!(matches!(image_to_tensor(b"P6\nx 1\n255\n"), Err(FormatError::MalformedHeader(_))));
    }
}
