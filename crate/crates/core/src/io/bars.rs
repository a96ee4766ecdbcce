use std::io::Read;

use chrono::{DateTime, NaiveDateTime};

use super::{row_error, IoError};

#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub timestamp: NaiveDateTime,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: Option<f64>,
}

/// Bars in file order, treated as one contiguous series.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BarFile {
    pub bars: Vec<Bar>,
}

impl BarFile {
    pub fn closes(&self) -> Vec<f64> {
        self.bars.iter().map(|b| b.close).collect()
    }

    /// `ln(C_t / C_{t-1})` for every consecutive pair.
    pub fn log_returns(&self) -> Vec<f64> {
        self.bars
            .windows(2)
            .map(|w| (w[1].close / w[0].close).ln())
            .collect()
    }
}

/// Accepts RFC 3339 (offsets are normalized to UTC) or a naive
/// `YYYY-MM-DD[T ]HH:MM[:SS]` timestamp.
pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.naive_utc());
    }
    ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name))
}

/// Reads `timestamp,open,high,low,close[,volume]` rows, keeping at most
/// `take` of them. Rows are numbered from 1 after the header.
pub fn load_bars<R: Read>(reader: R, take: Option<usize>) -> Result<BarFile, IoError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(["timestamp", "open", "high", "low", "close"]) {
        *slot = column(&headers, name).ok_or_else(|| IoError::Header {
            expected: "timestamp,open,high,low,close[,volume]".into(),
            found: headers.iter().collect::<Vec<_>>().join(","),
        })?;
    }
    let vol = column(&headers, "volume");
    let limit = take.unwrap_or(usize::MAX);

    let mut bars: Vec<Bar> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        if bars.len() >= limit {
            break;
        }
        let row = i as u64 + 1;
        let record = record.map_err(|e| row_error(row, e.to_string()))?;
        let field = |j: usize| record.get(j).ok_or_else(|| row_error(row, "missing field"));
        let ts = field(idx[0])?;
        let timestamp =
            parse_timestamp(ts).ok_or_else(|| row_error(row, format!("unparseable timestamp `{ts}`")))?;
        let mut px = [0.0; 4];
        for (k, name) in ["open", "high", "low", "close"].iter().enumerate() {
            let text = field(idx[k + 1])?;
            let v: f64 = text
                .parse()
                .map_err(|_| row_error(row, format!("{name} `{text}` is not a number")))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(row_error(row, format!("{name} {v} is not a positive price")));
            }
            px[k] = v;
        }
        let [open, high, low, close] = px;
        if !(low <= open.min(close) && open.max(close) <= high) {
            return Err(row_error(
                row,
                format!("inconsistent bar: open {open}, high {high}, low {low}, close {close}"),
            ));
        }
        let volume = match vol.and_then(|j| record.get(j)).filter(|s| !s.is_empty()) {
            None => None,
            Some(text) => {
                let v: f64 = text
                    .parse()
                    .map_err(|_| row_error(row, format!("volume `{text}` is not a number")))?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(row_error(row, format!("volume {v} is negative")));
                }
                Some(v)
            }
        };
        if let Some(prev) = bars.last() {
            if timestamp <= prev.timestamp {
                return Err(row_error(
                    row,
                    format!("timestamp {ts} does not follow {}", prev.timestamp),
                ));
            }
        }
        bars.push(Bar {
            timestamp,
            open,
            high,
            low,
            close,
            volume,
        });
    }
    Ok(BarFile { bars })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "timestamp,open,high,low,close,volume
2021-03-01T09:30:00Z,100,101,99.5,100.5,1200
2021-03-01 09:35:00,100.5,100.9,100.1,100.2,
2021-03-01T09:40:00-00:00,100.2,100.4,99.9,100.3,800
";

    #[test]
    fn parses_and_returns() {
        let b = load_bars(GOOD.as_bytes(), None).unwrap();
        assert_eq!(b.bars.len(), 3);
        assert_eq!(b.bars[1].volume, None);
        let r = b.log_returns();
        assert_eq!(r.len(), 2);
        assert!((r[0] - (100.2f64 / 100.5).ln()).abs() < 1e-15);
        assert_eq!(load_bars(GOOD.as_bytes(), Some(2)).unwrap().bars.len(), 2);
    }

    #[test]
    fn row_errors() {
        let dup = GOOD.replace("09:40:00-00:00", "09:35:00Z");
        let err = load_bars(dup.as_bytes(), None).unwrap_err();
        assert!(err.to_string().starts_with("row 3:"), "{err}");
        let neg = GOOD.replace("100.5,1200", "-1,1200");
        assert!(load_bars(neg.as_bytes(), None).unwrap_err().to_string().starts_with("row 1:"));
        let bad = GOOD.replace("100.2,100.4", "x,100.4");
        assert!(load_bars(bad.as_bytes(), None).unwrap_err().to_string().starts_with("row 3:"));
        let hl = GOOD.replace("100,101,99.5", "100,99,99.5");
        assert!(load_bars(hl.as_bytes(), None).is_err());
        assert!(matches!(
            load_bars("time,close\n".as_bytes(), None),
            Err(IoError::Header { .. })
        ));
    }
}
