//! Named built-in fixtures, plus fixture files on disk.

use std::collections::BTreeMap;
use std::path::Path;

use hfl_core::complex::{figure_eight, figure_eight_rollspin, torus_knot, unknot};
use hfl_core::fixture::{parse_fixture, parse_maps, serialize_complex, serialize_map};
use hfl_core::{Complex, Morphism};

use crate::CliError;

/// A resolved fixture: a complex, optionally with one named chain map on it,
/// and the text it was read from (for hashing).
#[derive(Clone, Debug)]
pub struct Resolved {
    pub name: String,
    pub complex: Complex,
    pub map: Option<(String, Morphism)>,
    pub source: String,
}

pub struct Registry {
    builtins: BTreeMap<&'static str, Resolved>,
}

pub const BUILTIN_NAMES: [&str; 5] = ["unknot", "trefoil", "figure_eight", "fig8_dual", "fig8_rollspin_map"];

fn checked(name: &str, c: Complex) -> Result<Resolved, CliError> {
    let report = c.validate();
    if !report.is_valid() {
        return Err(CliError::Invalid(format!("built-in fixture `{name}` failed validation: {report}")));
    }
    let source = serialize_complex(&c);
    Ok(Resolved { name: name.to_string(), complex: c, map: None, source })
}

impl Registry {
    /// Builds and re-validates every built-in.
    pub fn builtin() -> Result<Registry, CliError> {
        let mut builtins = BTreeMap::new();
        builtins.insert("unknot", checked("unknot", unknot())?);
        let trefoil = torus_knot(2, 3).map_err(|e| CliError::Invalid(e.to_string()))?;
        builtins.insert("trefoil", checked("trefoil", trefoil)?);
        builtins.insert("figure_eight", checked("figure_eight", figure_eight())?);
        builtins.insert("fig8_dual", checked("fig8_dual", figure_eight().dual().with_name("fig8_dual"))?);
        let fig8 = figure_eight();
        let roll = figure_eight_rollspin(&fig8);
        if !fig8.is_chain_map(&roll) {
            return Err(CliError::Invalid("built-in map `fig8_rollspin_map` is not a chain map".into()));
        }
        let mut r = checked("fig8_rollspin_map", fig8)?;
        r.source.push_str(&serialize_map(&r.complex, "rollspin", &roll));
        r.map = Some(("rollspin".into(), roll));
        builtins.insert("fig8_rollspin_map", r);
        Ok(Registry { builtins })
    }

    /// Built-in name, `torus:p,q`, or a fixture file path.
    pub fn resolve(&self, spec: &str) -> Result<Resolved, CliError> {
        if let Some(r) = self.builtins.get(spec) {
            return Ok(r.clone());
        }
        if let Some(pq) = spec.strip_prefix("torus:") {
            let (p, q) = parse_pair(pq).ok_or_else(|| CliError::Usage(format!("expected torus:p,q, got `{spec}`")))?;
            let c = torus_knot(p, q).map_err(|e| CliError::Invalid(e.to_string()))?;
            return checked(spec, c);
        }
        let path = Path::new(spec);
        if path.exists() {
            let text = read(path)?;
            let fx = parse_fixture(&text).map_err(|e| CliError::Invalid(format!("{spec}: {e}")))?;
            let report = fx.complex.validate();
            if !report.is_valid() {
                return Err(CliError::Invalid(format!("{spec}: {report}")));
            }
            let map = fx.maps.into_iter().next();
            return Ok(Resolved { name: fx.complex.name.clone(), complex: fx.complex, map, source: text });
        }
        Err(CliError::Usage(format!(
            "unknown fixture `{spec}` (built-ins: {}, torus:p,q, or a file path)",
            BUILTIN_NAMES.join(", ")
        )))
    }

    /// A chain map on `host`: a built-in map fixture, or a file of `map` lines.
    pub fn resolve_map(&self, spec: &str, host: &Complex) -> Result<(String, Morphism, String), CliError> {
        if let Some(r) = self.builtins.get(spec) {
            if let Some((name, m)) = &r.map {
                if r.complex.gens() != host.gens() {
                    return Err(CliError::Invalid(format!("map fixture `{spec}` lives on a different complex")));
                }
                return Ok((name.clone(), m.clone(), r.source.clone()));
            }
        }
        let path = Path::new(spec);
        if !path.exists() {
            return Err(CliError::Usage(format!("unknown map fixture `{spec}`")));
        }
        let text = read(path)?;
        let maps = parse_maps(&text, host).map_err(|e| CliError::Invalid(format!("{spec}: {e}")))?;
        let (name, m) = maps
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Invalid(format!("{spec}: no map lines")))?;
        Ok((name, m, text))
    }
}

pub fn parse_pair(s: &str) -> Option<(i64, i64)> {
    let (p, q) = s.split_once(',')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
