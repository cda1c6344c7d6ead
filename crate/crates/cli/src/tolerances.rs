use std::collections::BTreeMap;

/// Default tolerance for every named check. Overridden with `--tol key=value`.
const DEFAULTS: [(&str, f64); 13] = [
    ("area", 1e-2),
    ("b_minus_inf", 1e-8),
    ("branch", 1e-8),
    ("curvature", 1e-6),
    ("isospectral", 1e-2),
    ("orbit", 1e-9),
    ("prelim", 1e-8),
    ("pushforward", 1e-10),
    ("roundtrip", 1e-9),
    ("symmetry", 1e-12),
    ("variational", 1e-6),
    ("weyl", 0.05),
    ("zero_mode", 1e-8),
];

#[derive(Debug, Clone)]
pub struct Tolerances(BTreeMap<&'static str, f64>);

impl Tolerances {
    pub fn with_overrides(overrides: &[(String, f64)]) -> Result<Self, String> {
        let mut map: BTreeMap<_, _> = DEFAULTS.into_iter().collect();
        for (key, value) in overrides {
            let slot = map.iter_mut().find(|(k, _)| **k == key.as_str()).map(|(_, v)| v).ok_or_else(|| {
                let known: Vec<_> = DEFAULTS.iter().map(|(k, _)| *k).collect();
                format!("unknown tolerance '{key}' (known: {})", known.join(", "))
            })?;
            *slot = *value;
        }
        Ok(Self(map))
    }

    pub fn get(&self, key: &str) -> f64 {
        *self.0.get(key).unwrap_or_else(|| panic!("no tolerance named {key}"))
    }
}

/// Parses one `key=value` override.
pub fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("tolerance '{value}' is not a number"))?;
    if !(value > 0.0 && value.is_finite()) {
        return Err(format!("tolerance for '{key}' must be positive and finite"));
    }
    Ok((key.trim().to_string(), value))
}
