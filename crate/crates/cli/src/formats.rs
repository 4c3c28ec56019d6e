//! Signal CSV, PGM (P2/P5), raw float sidecars and JSON metadata.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Reads one real per line; blank lines and lines starting with `#` are skipped.
pub fn read_signal_csv(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    parse_signal_csv(&text).map_err(|m| CliError::io(format!("{}: {m}", path.display())))
}

pub fn parse_signal_csv(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| format!("line {}: `{line}` is not a number", i + 1))?;
        out.push(v);
    }
    Ok(out)
}

pub fn format_signal_csv(values: &[f64], comment: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            s.push_str("# ");
            s.push_str(line);
            s.push('\n');
        }
    }
    for v in values {
        s.push_str(&format!("{v}\n"));
    }
    s
}

pub fn write_signal_csv(path: &Path, values: &[f64], comment: Option<&str>) -> CliResult<()> {
    write_file(path, format_signal_csv(values, comment).as_bytes())
}

/// Row-major matrix, one comma-separated row per line.
pub fn write_matrix_csv(path: &Path, width: usize, values: &[f64]) -> CliResult<()> {
    let mut s = String::new();
    for row in values.chunks(width) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    write_file(path, s.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut f = fs::File::create(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    f.write_all(bytes)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

/// Grayscale image with integer samples in `0..=maxval`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<&str, String> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() && self.bytes[self.pos] != b'#' {
            self.pos += 1;
        }
        if start == self.pos {
            return Err("unexpected end of header".into());
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| "header is not ASCII".to_string())
    }

    fn number(&mut self, what: &str) -> Result<usize, String> {
        let t = self.token()?;
        t.parse().map_err(|_| format!("bad {what} `{t}`"))
    }
}

/// Parses a plain (P2) or binary (P5) PGM.
pub fn parse_pgm(bytes: &[u8]) -> Result<Pgm, String> {
    let mut h = Header { bytes, pos: 0 };
    let magic = h.token()?.to_string();
    let binary = match magic.as_str() {
        "P2" => false,
        "P5" => true,
        other => return Err(format!("unsupported magic `{other}` (expected P2 or P5)")),
    };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if width == 0 || height == 0 {
        return Err("zero image dimension".into());
    }
    if maxval == 0 || maxval > 65535 {
        return Err(format!("maxval {maxval} outside 1..=65535"));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| "image dimensions overflow".to_string())?;
    let mut pixels = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        if h.pos >= bytes.len() || !bytes[h.pos].is_ascii_whitespace() {
            return Err("missing raster separator".into());
        }
        let raster = &bytes[h.pos + 1..];
        let wide = maxval > 255;
        let need = count * if wide { 2 } else { 1 };
        if raster.len() < need {
            return Err(format!("raster truncated: {} of {need} bytes", raster.len()));
        }
        if wide {
            pixels.extend(raster[..need].chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])));
        } else {
            pixels.extend(raster[..need].iter().map(|&b| b as u16));
        }
    } else {
        for _ in 0..count {
            let v = h.number("pixel")?;
            pixels.push(u16::try_from(v).map_err(|_| format!("pixel {v} too large"))?);
        }
    }
    if let Some(&p) = pixels.iter().find(|&&p| p as usize > maxval) {
        return Err(format!("pixel {p} exceeds maxval {maxval}"));
    }
    Ok(Pgm {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}

pub fn read_pgm(path: &Path) -> CliResult<Pgm> {
    let bytes = fs::read(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    parse_pgm(&bytes).map_err(|m| CliError::io(format!("{}: malformed PGM: {m}", path.display())))
}

/// Binary PGM (P5); 16-bit big-endian samples when `maxval > 255`.
pub fn encode_pgm(pgm: &Pgm) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", pgm.width, pgm.height, pgm.maxval).into_bytes();
    if pgm.maxval > 255 {
        for p in &pgm.pixels {
            out.extend_from_slice(&p.to_be_bytes());
        }
    } else {
        out.extend(pgm.pixels.iter().map(|&p| p as u8));
    }
    out
}

/// Affine display mapping of real values onto `0..=255`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisplayMapping {
    pub min: f64,
    pub max: f64,
    /// `pixel = round((value - min) * scale)`; zero for flat images.
    pub scale: f64,
}

pub fn to_display(values: &[f64], width: usize, height: usize) -> (Pgm, DisplayMapping) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = if max > min { 255.0 / (max - min) } else { 0.0 };
    let pixels = values
        .iter()
        .map(|v| ((v - min) * scale).round().clamp(0.0, 255.0) as u16)
        .collect();
    (
        Pgm {
            width,
            height,
            maxval: 255,
            pixels,
        },
        DisplayMapping { min, max, scale },
    )
}

/// Header written next to a raw `.f64` sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RawHeader {
    pub height: usize,
    pub width: usize,
    pub dtype: String,
    pub endianness: String,
    pub order: String,
}

pub fn write_raw(dir: &Path, stem: &str, height: usize, width: usize, values: &[f64]) -> CliResult<()> {
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    write_file(&dir.join(format!("{stem}.f64")), &bytes)?;
    write_json(
        &dir.join(format!("{stem}.json")),
        &RawHeader {
            height,
            width,
            dtype: "f64".into(),
            endianness: "little".into(),
            order: "row-major".into(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read_raw(path: &Path) -> CliResult<Vec<f64>> {
        let bytes = fs::read(path)?;
        if bytes.len() % 8 != 0 {
            return Err(CliError::io(format!("{}: length not a multiple of 8", path.display())));
        }
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let v = vec![0.1, -1e-300, 1.0 / 3.0, 12345.678, f64::MIN_POSITIVE];
        let text = format_signal_csv(&v, Some("comment\nsecond"));
        assert!(text.starts_with("# comment\n# second\n"));
        assert_eq!(parse_signal_csv(&text).unwrap(), v);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(parse_signal_csv("1\nabc\n").unwrap_err().contains("line 2"));
    }

    #[test]
    fn plain_pgm_with_comments() {
        let p = parse_pgm(b"P2\n# made by hand\n3 2 # inline\n15\n0 1 2\n3 4 15\n").unwrap();
        assert_eq!((p.width, p.height, p.maxval), (3, 2, 15));
        assert_eq!(p.pixels, vec![0, 1, 2, 3, 4, 15]);
    }

    #[test]
    fn binary_pgm_round_trip() {
        for maxval in [255u16, 4095] {
            let p = Pgm {
                width: 4,
                height: 2,
                maxval,
                pixels: vec![0, 1, 2, 3, maxval, 7, 8, 9],
            };
            assert_eq!(parse_pgm(&encode_pgm(&p)).unwrap(), p);
        }
    }

    #[test]
    fn malformed_pgms() {
        assert!(parse_pgm(b"P6\n1 1\n255\n\0\0\0").is_err());
        assert!(parse_pgm(b"P5\n4 4\n255\n\0\0").unwrap_err().contains("truncated"));
        assert!(parse_pgm(b"P2\n2 1\n10\n3 11\n").unwrap_err().contains("exceeds"));
        assert!(parse_pgm(b"P2\n2 1\n").is_err());
        assert!(parse_pgm(b"P2\n2 1\n70000\n1 2").is_err());
    }

    #[test]
    fn display_mapping() {
        let (pgm, m) = to_display(&[-1.0, 0.0, 1.0, 3.0], 2, 2);
        assert_eq!(pgm.pixels, vec![0, 64, 128, 255]);
        assert_eq!((m.min, m.max), (-1.0, 3.0));
        let (flat, m) = to_display(&[2.0; 4], 2, 2);
        assert_eq!(flat.pixels, vec![0; 4]);
        assert_eq!(m.scale, 0.0);
    }

    #[test]
    fn raw_sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let v = [1.5, -0.0, 1e-300, 7.0, 0.1, 2.0];
        write_raw(dir.path(), "band", 2, 3, &v).unwrap();
        assert_eq!(read_raw(&dir.path().join("band.f64")).unwrap(), v);
        let header: RawHeader =
            serde_json::from_str(&fs::read_to_string(dir.path().join("band.json")).unwrap()).unwrap();
        assert_eq!((header.height, header.width, header.dtype.as_str()), (2, 3, "f64"));
    }
}
