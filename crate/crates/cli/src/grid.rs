use std::fmt;
use std::str::FromStr;

/// `start:stop:count`, evenly spaced and inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        let start: f64 = start.parse().map_err(|e| format!("grid start: {e}"))?;
        let stop: f64 = stop.parse().map_err(|e| format!("grid stop: {e}"))?;
        let count: usize = count.parse().map_err(|e| format!("grid count: {e}"))?;
        if count < 2 {
            return Err(format!("grid count must be at least 2, got {count}"));
        }
        if !(start.is_finite() && stop.is_finite()) || start > stop {
            return Err(format!("grid bounds must be finite with start <= stop, got {start}:{stop}"));
        }
        Ok(GridSpec { start, stop, count })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}
