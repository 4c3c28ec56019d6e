use std::fs;
use std::path::Path;

use awt::analysis::{
    seeded_noise, synthetic_signal, verify_transform_with_bank, Tolerances, VerificationReport,
};
use awt::bank_io::BankCache;
use awt::dwt::default_image_levels;
use awt::filterbank::{
    awt2d_fft, awt_fft, derive_filter_bank_2d_levels, filter_bank_for_levels, AwtFilterBank, FilterBank2D,
};
use awt::reference::{inverse_awt, inverse_awt_2d};
use awt::scalar::{max_abs, max_abs_diff, mean};
use awt::signal::{Image, Signal};
use awt::wavelet::WaveletSpec;
use awt::{max_levels, WaveletKind};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::formats::{
    encode_pgm, read_pgm, read_signal_csv, to_display, write_file, write_json, write_matrix_csv, write_raw,
    write_signal_csv, DisplayMapping,
};
use crate::Common;

fn wavelet(c: &Common) -> CliResult<(WaveletKind, WaveletSpec<f64>)> {
    let kind: WaveletKind = c.wavelet.parse()?;
    Ok((kind, kind.spec()))
}

fn tolerances(c: &Common) -> CliResult<Tolerances> {
    match c.tolerance {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::domain(format!("tolerance must be positive, got {t}"))),
        Some(t) => Ok(Tolerances::all(t)),
        None => Ok(Tolerances::default()),
    }
}

/// Parses `0,2,4-6` into sorted unique scales, each at most `k`.
pub fn parse_scales(spec: Option<&str>, k: usize) -> CliResult<Vec<usize>> {
    let Some(spec) = spec else {
        return Ok((0..=k).collect());
    };
    parse_scale_list(spec, k)
}

/// Kernel scales for `filters`: the DC kernel only when asked for explicitly.
fn filter_scales(spec: Option<&str>, k: usize) -> CliResult<Vec<usize>> {
    match spec {
        Some(spec) => parse_scale_list(spec, k),
        None => Ok((1..=k).collect()),
    }
}

fn parse_scale_list(spec: &str, k: usize) -> CliResult<Vec<usize>> {
    let bad = || CliError::domain(format!("bad scale list `{spec}`"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lo, hi) = match part.split_once('-') {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => {
                let v: usize = part.parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        if hi > k {
            return Err(CliError::domain(format!("scale {hi} exceeds the maximum scale {k}")));
        }
        out.extend(lo..=hi);
    }
    if out.is_empty() {
        return Err(bad());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn stem(s: usize) -> String {
    if s == 0 {
        "dc".into()
    } else {
        format!("scale_{s}")
    }
}

fn create_out(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))
}

fn cache(c: &Common) -> CliResult<Option<BankCache>> {
    match &c.bank_cache {
        Some(d) => {
            create_out(d)?;
            Ok(Some(BankCache::new(d)))
        }
        None => Ok(None),
    }
}

fn bank_1d(c: &Common, w: &WaveletSpec<f64>, n: usize, k: usize) -> CliResult<AwtFilterBank<f64>> {
    Ok(match cache(c)? {
        Some(cache) => cache.get_or_derive(w, n, k)?,
        None => filter_bank_for_levels(w, n, k)?,
    })
}

fn bank_2d(c: &Common, w: &WaveletSpec<f64>, h: usize, wd: usize, k: usize) -> CliResult<FilterBank2D<f64>> {
    Ok(match cache(c)? {
        Some(cache) => cache.get_or_derive_2d(w, h, wd, k)?,
        None => derive_filter_bank_2d_levels(w, h, wd, k)?,
    })
}

#[derive(Serialize)]
struct Residuals {
    reconstruction: f64,
    zero_mean: f64,
    dc_mean: f64,
    reconstruction_tolerance: f64,
}

#[derive(Serialize)]
struct DecomposeMeta {
    input: String,
    n: usize,
    k: usize,
    wavelet: String,
    scales: Vec<usize>,
    residuals: Residuals,
    files: Vec<String>,
}

pub fn decompose(c: &Common, input: &Path) -> CliResult<u8> {
    let (kind, w) = wavelet(c)?;
    let tol = tolerances(c)?;
    let x = Signal::new(read_signal_csv(input)?)?;
    let n = x.len();
    let k = max_levels(n)?;
    let scales = parse_scales(c.scales.as_deref(), k)?;
    let bank = bank_1d(c, &w, n, k)?;
    let sp = awt_fft(&x, &bank)?;

    let amp = max_abs(x.as_slice()).max(1.0);
    let residuals = Residuals {
        reconstruction: max_abs_diff(inverse_awt(&sp).as_slice(), x.as_slice()),
        zero_mean: sp.spectra().iter().map(|s| mean(s.as_slice()).abs()).fold(0.0, f64::max),
        dc_mean: (mean(sp.dc().as_slice()) - mean(x.as_slice())).abs(),
        reconstruction_tolerance: tol.reconstruction * amp,
    };
    if residuals.reconstruction > residuals.reconstruction_tolerance {
        return Err(CliError::domain(format!(
            "reconstruction residual {:e} exceeds tolerance {:e}",
            residuals.reconstruction, residuals.reconstruction_tolerance
        )));
    }

    create_out(&c.out)?;
    let mut files = Vec::new();
    for &s in &scales {
        let name = format!("{}.csv", stem(s));
        let label = if s == 0 { "DC term".to_string() } else { format!("scale {s}") };
        let comment = format!("{label} of {} (n {n}, {kind})", input.display());
        write_signal_csv(&c.out.join(&name), sp.scale(s)?.as_slice(), Some(&comment))?;
        files.push(name);
    }

    let mut table = String::from("# index dc");
    for s in 1..=k {
        table.push_str(&format!(" scale_{s}"));
    }
    table.push_str(" sum\n");
    for j in 0..n {
        table.push_str(&j.to_string());
        let mut sum = 0.0;
        for band in sp.iter() {
            sum += band[j];
            table.push_str(&format!(" {}", band[j]));
        }
        table.push_str(&format!(" {sum}\n"));
    }
    write_file(&c.out.join("spectra.dat"), table.as_bytes())?;
    files.push("spectra.dat".into());
    files.push("meta.json".into());

    write_json(
        &c.out.join("meta.json"),
        &DecomposeMeta {
            input: input.display().to_string(),
            n,
            k,
            wavelet: kind.to_string(),
            scales,
            residuals,
            files,
        },
    )?;
    println!("n {n}, k {k}: wrote {}", c.out.display());
    Ok(0)
}

enum Size {
    OneD(usize),
    TwoD(usize, usize),
}

fn parse_size(s: &str) -> CliResult<Size> {
    let bad = || CliError::domain(format!("bad size `{s}` (expected N or HxW)"));
    match s.split_once(['x', 'X']) {
        Some((h, w)) => Ok(Size::TwoD(h.trim().parse().map_err(|_| bad())?, w.trim().parse().map_err(|_| bad())?)),
        None => Ok(Size::OneD(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Rotates a periodic kernel so that its origin sits at index `n / 2`.
pub fn centre(kernel: &[f64]) -> Vec<f64> {
    let n = kernel.len();
    (0..n).map(|i| kernel[(i + n - n / 2) % n]).collect()
}

fn centre_2d(kernel: &[f64], h: usize, w: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(h * w);
    for r in 0..h {
        let src = (r + h - h / 2) % h;
        for col in 0..w {
            out.push(kernel[src * w + (col + w - w / 2) % w]);
        }
    }
    out
}

#[derive(Serialize)]
struct FilterEntry {
    scale: usize,
    file: String,
    effective_support: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    heatmap: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    display: Option<DisplayMapping>,
}

#[derive(Serialize)]
struct FiltersMeta {
    wavelet: String,
    dims: Vec<usize>,
    k: usize,
    origin: Vec<usize>,
    filters: Vec<FilterEntry>,
}

pub fn filters(c: &Common, size: &str, levels: Option<usize>) -> CliResult<u8> {
    let (kind, w) = wavelet(c)?;
    let mut entries = Vec::new();
    let meta = match parse_size(size)? {
        Size::OneD(n) => {
            let k = levels.map_or_else(|| max_levels(n), Ok)?;
            let scales = filter_scales(c.scales.as_deref(), k)?;
            let bank = bank_1d(c, &w, n, k)?;
            create_out(&c.out)?;
            for &s in &scales {
                let kernel = bank.kernel(s)?;
                let file = format!("filter_{}.csv", stem(s));
                let comment = format!("{kind} n {n} scale {s}; origin at zero-based line {}", n / 2);
                write_signal_csv(&c.out.join(&file), &centre(kernel), Some(&comment))?;
                entries.push(FilterEntry {
                    scale: s,
                    file,
                    effective_support: bank.effective_support(s)?,
                    heatmap: None,
                    display: None,
                });
            }
            FiltersMeta {
                wavelet: kind.to_string(),
                dims: vec![n],
                k,
                origin: vec![n / 2],
                filters: entries,
            }
        }
        Size::TwoD(h, wd) => {
            let k = levels.map_or_else(|| default_image_levels(h, wd), Ok)?;
            let scales = filter_scales(c.scales.as_deref(), k)?;
            let bank = bank_2d(c, &w, h, wd, k)?;
            create_out(&c.out)?;
            for &s in &scales {
                let kernel = centre_2d(bank.kernel(s)?, h, wd);
                let file = format!("filter_{}.csv", stem(s));
                let heatmap = format!("filter_{}.pgm", stem(s));
                write_matrix_csv(&c.out.join(&file), wd, &kernel)?;
                let (pgm, display) = to_display(&kernel, wd, h);
                write_file(&c.out.join(&heatmap), &encode_pgm(&pgm))?;
                entries.push(FilterEntry {
                    scale: s,
                    file,
                    effective_support: awt::filterbank::effective_support(&kernel),
                    heatmap: Some(heatmap),
                    display: Some(display),
                });
            }
            FiltersMeta {
                wavelet: kind.to_string(),
                dims: vec![h, wd],
                k,
                origin: vec![h / 2, wd / 2],
                filters: entries,
            }
        }
    };
    write_json(&c.out.join("meta.json"), &meta)?;
    println!("k {}: wrote {} kernels to {}", meta.k, meta.filters.len(), c.out.display());
    Ok(0)
}

fn builtin_suite() -> CliResult<Vec<(String, Signal<f64>)>> {
    let alternating = Signal::new((0..32).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect())?;
    Ok(vec![
        ("synthetic bumps and step".into(), synthetic_signal(128)?),
        ("seeded noise".into(), seeded_noise(64, 1)?),
        ("alternating".into(), alternating),
        ("constant".into(), Signal::new(vec![0.75; 16])?),
    ])
}

pub fn verify(c: &Common, input: Option<&Path>) -> CliResult<u8> {
    let (kind, w) = wavelet(c)?;
    let tol = tolerances(c)?;
    let cases = match input {
        Some(p) => vec![(p.display().to_string(), Signal::new(read_signal_csv(p)?)?)],
        None => builtin_suite()?,
    };
    let mut all = VerificationReport::default();
    for (name, x) in &cases {
        let n = x.len();
        let bank = bank_1d(c, &w, n, max_levels(n)?)?;
        let report = verify_transform_with_bank(x, &w, &bank, &tol)?;
        println!("== {name} (n {n}, {kind})");
        println!("{report}");
        all.extend(report);
    }
    let passed = all.passed();
    println!("suite {}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct ImageOutput {
    name: String,
    pgm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    raw: Option<String>,
    display: DisplayMapping,
}

#[derive(Serialize)]
struct ImageMeta {
    input: String,
    height: usize,
    width: usize,
    maxval: u16,
    k: usize,
    wavelet: String,
    scales: Vec<usize>,
    residuals: Residuals,
    outputs: Vec<ImageOutput>,
}

pub fn image(c: &Common, input: &Path, levels: Option<usize>) -> CliResult<u8> {
    let (kind, w) = wavelet(c)?;
    let tol = tolerances(c)?;
    let pgm = read_pgm(input)?;
    let (h, wd) = (pgm.height, pgm.width);
    let img = Image::new(h, wd, pgm.pixels.iter().map(|&p| p as f64).collect())?;
    let k = levels.map_or_else(|| default_image_levels(h, wd), Ok)?;
    let scales = parse_scales(c.scales.as_deref(), k)?;
    let bank = bank_2d(c, &w, h, wd, k)?;
    let sp = awt2d_fft(&img, &bank)?;

    let amp = max_abs(img.as_slice()).max(1.0);
    let residuals = Residuals {
        reconstruction: max_abs_diff(inverse_awt_2d(&sp).as_slice(), img.as_slice()),
        zero_mean: sp.spectra().iter().map(|s| mean(s.as_slice()).abs()).fold(0.0, f64::max),
        dc_mean: (mean(sp.dc().as_slice()) - mean(img.as_slice())).abs(),
        reconstruction_tolerance: tol.reconstruction * amp,
    };
    if residuals.reconstruction > residuals.reconstruction_tolerance {
        return Err(CliError::domain(format!(
            "reconstruction residual {:e} exceeds tolerance {:e}",
            residuals.reconstruction, residuals.reconstruction_tolerance
        )));
    }

    create_out(&c.out)?;
    write_file(&c.out.join("original.pgm"), &encode_pgm(&pgm))?;
    let scale = 255.0 / pgm.maxval as f64;
    let mut outputs = vec![ImageOutput {
        name: "original".into(),
        pgm: "original.pgm".into(),
        raw: None,
        display: DisplayMapping {
            min: 0.0,
            max: pgm.maxval as f64,
            scale,
        },
    }];
    for &s in &scales {
        let name = stem(s);
        let band = sp.scale(s)?;
        let (display_pgm, display) = to_display(band.as_slice(), wd, h);
        let file = format!("{name}.pgm");
        write_file(&c.out.join(&file), &encode_pgm(&display_pgm))?;
        write_raw(&c.out, &name, h, wd, band.as_slice())?;
        outputs.push(ImageOutput {
            raw: Some(format!("{name}.f64")),
            name,
            pgm: file,
            display,
        });
    }
    write_json(
        &c.out.join("meta.json"),
        &ImageMeta {
            input: input.display().to_string(),
            height: h,
            width: wd,
            maxval: pgm.maxval,
            k,
            wavelet: kind.to_string(),
            scales,
            residuals,
            outputs,
        },
    )?;
    println!("{h}x{wd}, k {k}: wrote {}", c.out.display());
    Ok(0)
}
