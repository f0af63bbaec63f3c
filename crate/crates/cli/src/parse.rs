use std::path::Path;

use anyhow::{bail, Context, Result};

use dptm::io::ChannelSpec;
use dptm::tomography::all_entries;

/// `--channel`: inline `model=...` text or a path to a channel-spec JSON file.
pub fn channel(text: &str) -> Result<ChannelSpec> {
    if text.trim_start().starts_with("model=") {
        return Ok(ChannelSpec::parse_inline(text)?);
    }
    ChannelSpec::from_file(Path::new(text)).with_context(|| format!("reading channel spec {text}"))
}

fn pair(text: &str) -> Result<(usize, usize)> {
    let (i, j) = text
        .split_once(',')
        .with_context(|| format!("expected i,j but got {text:?}"))?;
    let i = i
        .trim()
        .parse()
        .with_context(|| format!("bad index in {text:?}"))?;
    let j = j
        .trim()
        .parse()
        .with_context(|| format!("bad index in {text:?}"))?;
    Ok((i, j))
}

/// `i,j;i,j;...` or `full`. Indices are checked against `4ⁿ`; the result is
/// sorted and deduplicated.
pub fn entries(text: &str, n: usize) -> Result<Vec<(usize, usize)>> {
    if text.trim() == "full" {
        return Ok(all_entries(n));
    }
    let bound = 1usize << (2 * n);
    let mut out = text
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(pair)
        .collect::<Result<Vec<_>>>()?;
    if out.is_empty() {
        bail!("no entries given");
    }
    if let Some(&(i, j)) = out.iter().find(|&&(i, j)| i >= bound || j >= bound) {
        bail!("entry ({i},{j}) out of range for {n} qubit(s) (indices must be < {bound})");
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `i,j=value;...`
pub fn known(text: &str) -> Result<Vec<(usize, usize, f64)>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (key, value) = item
                .split_once('=')
                .with_context(|| format!("expected i,j=value but got {item:?}"))?;
            let (i, j) = pair(key)?;
            let value: f64 = value
                .trim()
                .parse()
                .with_context(|| format!("bad value in {item:?}"))?;
            Ok((i, j, value))
        })
        .collect()
}
