//! Line-based `key = value` scenario files and sweep ranges.

use crate::error::{CliError, CliResult};

/// Keys a scenario may set.
pub const KEYS: &[&str] = &[
    "command", "task", "profile", "weight", "dominator", "eps", "measure", "n", "mu_total", "p_list", "s_grid",
    "r_grid", "tol", "output", "report",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// `start:end:step`, both ends included.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub step: f64,
    decimals: usize,
}

impl Range {
    /// `Ok(None)` when `token` is not shaped like a range.
    pub fn parse(token: &str) -> CliResult<Option<Range>> {
        let parts: Vec<&str> = token.split(':').collect();
        if parts.len() != 3 || token.contains(',') {
            return Ok(None);
        }
        let mut v = [0.0; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = parse_number(p).map_err(|_| CliError::validation(format!("bad range `{token}`")))?;
        }
        let decimals = parts.iter().map(|p| p.split_once('.').map_or(0, |(_, f)| f.len())).max().unwrap_or(0);
        let r = Range { start: v[0], end: v[1], step: v[2], decimals };
        if !(r.step > 0.0) || r.start > r.end {
            return Err(CliError::validation(format!("empty range `{token}`")));
        }
        Ok(Some(r))
    }

    /// The values, rounded to the decimals written in the range.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        let scale = 10f64.powi(self.decimals.min(15) as i32);
        (0..count)
            .map(|k| {
                let v = self.start + k as f64 * self.step;
                if self.decimals > 0 {
                    (v * scale).round() / scale
                } else {
                    v
                }
            })
            .collect()
    }
}

pub fn parse_number(s: &str) -> CliResult<f64> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::validation(format!("`{s}` is not a finite number"))),
    }
}

/// Where the single ranged parameter of a sweep sits.
#[derive(Debug, Clone, PartialEq)]
pub enum Ranged {
    /// `name = a:b:step`, referenced elsewhere as `$name`.
    Variable { name: String, range: Range },
    /// A range token inside the value of a scenario key.
    Inline { entry: usize, token: usize, range: Range },
}

impl Ranged {
    pub fn column(&self, entries: &[Entry]) -> String {
        match self {
            Ranged::Variable { name, .. } => name.clone(),
            Ranged::Inline { entry, .. } => entries[*entry].key.clone(),
        }
    }

    pub fn range(&self) -> &Range {
        match self {
            Ranged::Variable { range, .. } | Ranged::Inline { range, .. } => range,
        }
    }
}

/// A parsed scenario file before any value is interpreted.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    /// Scenario keys, in file order.
    pub entries: Vec<Entry>,
    pub ranged: Vec<Ranged>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries: Vec<Entry> = Vec::new();
        let mut variables: Vec<(String, Range, usize)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(CliError::at_line(line, format!("expected `key = value`, got `{body}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(CliError::at_line(line, format!("bad key `{key}`")));
            }
            if entries.iter().any(|e| e.key == key) || variables.iter().any(|v| v.0 == key) {
                return Err(CliError::at_line(line, format!("duplicate key `{key}`")));
            }
            if KEYS.contains(&key) {
                entries.push(Entry { key: key.into(), value: value.into(), line });
                continue;
            }
            match Range::parse(value).map_err(|e| CliError::at_line(line, e))? {
                Some(range) => variables.push((key.into(), range, line)),
                None => return Err(CliError::at_line(line, format!("unknown key `{key}`"))),
            }
        }
        let mut ranged = Vec::new();
        for (name, range, line) in variables {
            let reference = format!("${name}");
            if !entries.iter().any(|e| e.value.split_whitespace().any(|t| t == reference)) {
                return Err(CliError::at_line(line, format!("unknown key `{name}` (range never referenced)")));
            }
            ranged.push(Ranged::Variable { name, range });
        }
        for (i, e) in entries.iter().enumerate() {
            for (j, t) in e.value.split_whitespace().enumerate() {
                if let Some(range) = Range::parse(t).map_err(|err| CliError::at_line(e.line, err))? {
                    ranged.push(Ranged::Inline { entry: i, token: j, range });
                }
            }
        }
        Ok(ScenarioFile { entries, ranged })
    }

    /// The entries with the ranged parameter replaced by `value`.
    pub fn instantiate(&self, ranged: &Ranged, value: f64) -> Vec<Entry> {
        let text = value.to_string();
        let mut out = self.entries.clone();
        match ranged {
            Ranged::Variable { name, .. } => {
                let reference = format!("${name}");
                for e in &mut out {
                    e.value = e
                        .value
                        .split_whitespace()
                        .map(|t| if t == reference { text.as_str() } else { t })
                        .collect::<Vec<_>>()
                        .join(" ");
                }
            }
            Ranged::Inline { entry, token, .. } => {
                let e = &mut out[*entry];
                let mut tokens: Vec<&str> = e.value.split_whitespace().collect();
                tokens[*token] = &text;
                e.value = tokens.join(" ");
            }
        }
        out
    }
}
