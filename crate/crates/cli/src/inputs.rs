//! Resolving network names, code files and profiles from command-line text.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use lnc_core::algebra::{parse_module_spec, Module};
use lnc_core::codes::LinearCode;
use lnc_core::generators::{butterfly, char_network, kn_butterfly};
use lnc_core::network::{BlockProfile, Network};
use serde_json::Value;

/// `butterfly`, `butterfly-KX-KY-N`, `char-M`, or a path to a network JSON file.
pub fn network(name: &str) -> Result<Network> {
    if name == "butterfly" {
        return Ok(butterfly());
    }
    if let Some(rest) = name.strip_prefix("butterfly-") {
        let parts: Vec<usize> = rest
            .split('-')
            .map(|s| s.parse().with_context(|| format!("bad butterfly parameters in '{name}'")))
            .collect::<Result<_>>()?;
        let [kx, ky, n] = parts[..] else { bail!("expected butterfly-KX-KY-N, got '{name}'") };
        return Ok(kn_butterfly(kx, ky, n)?);
    }
    if let Some(m) = name.strip_prefix("char-") {
        if let Ok(m) = m.parse() {
            return Ok(char_network(m)?);
        }
    }
    let text = fs::read_to_string(name).with_context(|| format!("reading network '{name}'"))?;
    Ok(Network::from_json(&text)?)
}

pub fn module(spec: &str) -> Result<Module> {
    Ok(parse_module_spec(spec)?)
}

pub fn json_file(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Reads a code for `net`; `module` overrides the descriptor stored in the file.
pub fn code(net: &Network, path: &Path, module: Option<&str>) -> Result<LinearCode> {
    let v = json_file(path)?;
    // accept both a bare code and an object wrapping one under "code"
    let v = if v.get("edges").is_none() && v.get("code").is_some() { v["code"].clone() } else { v };
    Ok(match module {
        Some(spec) => LinearCode::from_json_with_module(net, &v, &self::module(spec)?)?,
        None => LinearCode::from_json(net, &v)?,
    })
}

/// Comma-separated block sizes.
pub fn sizes(text: &str) -> Result<Vec<usize>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse().with_context(|| format!("bad block size '{s}'")))
        .collect()
}

pub fn profile(k: &str, n: usize) -> Result<BlockProfile> {
    Ok(BlockProfile::new(sizes(k)?, n)?)
}
