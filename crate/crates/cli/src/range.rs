use std::str::FromStr;

use crate::error::CliError;

/// `start:end:count` with optional `:log` (geometric) or `:lin` spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    pub log: bool,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.count {
                    self.end
                } else if self.log {
                    self.start * (self.end / self.start).powf(t)
                } else {
                    self.start + (self.end - self.start) * t
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::config("range", format!("{why} in {s:?} (expected start:end:count[:log|:lin])"));
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad("wrong number of fields"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
        let end: f64 = parts[1].trim().parse().map_err(|_| bad("bad end"))?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad("bad count"))?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(_) => return Err(bad("unknown spacing")),
        };
        if !start.is_finite() || !end.is_finite() || count == 0 {
            return Err(bad("non-finite bound or zero count"));
        }
        if count > 1 && end <= start {
            return Err(bad("end must exceed start"));
        }
        if log && start <= 0.0 {
            return Err(bad("log spacing needs a positive start"));
        }
        Ok(Self { start, end, count, log })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let r: Range = "1e3:1e7:5:log".parse().unwrap();
        let v = r.values();
        assert_eq!(v.len(), 5);
        assert_eq!((v[0], v[4]), (1e3, 1e7));
        assert!((v[2] / 1e5 - 1.0).abs() < 1e-12);
        let r: Range = "1e4:1e5:10".parse().unwrap();
        assert_eq!(r.values()[1], 2e4);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["1:2", "2:1:3", "0:1:3:log", "1:2:0", "a:2:3", "1:2:3:cubic"] {
            assert!(s.parse::<Range>().is_err(), "{s}");
        }
    }
}
