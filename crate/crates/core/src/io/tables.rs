use std::io::{BufRead, BufReader, Read, Write};

use super::{fmt_f64, row_error, IoError};
use crate::features::{FeatureRow, FeatureTable, FEATURE_COLUMNS};
use crate::regimegen::{Annotation, DriftKind, TransitionEvent, TransitionMap};

pub const MAP_HEADER: &str = "start_index,duration,from_state,to_state";
pub const STREAM_HEADER: &str = "index,return,state_from,state_to,blend_weight";
pub const GROUND_TRUTH_HEADER: &str = "start_index,duration,from_state,to_state,type";

pub static FEATURE_HEADER: std::sync::LazyLock<String> =
    std::sync::LazyLock::new(|| format!("index,{},label", FEATURE_COLUMNS.join(",")));

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(r)
}

fn expect_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &str) -> Result<(), IoError> {
    let found = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if found != expected {
        return Err(IoError::Header {
            expected: expected.to_string(),
            found,
        });
    }
    Ok(())
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, name: &str, row: u64) -> Result<T, IoError> {
    let text = record.get(i).unwrap_or("");
    text.parse()
        .map_err(|_| row_error(row, format!("{name} `{text}` is not valid")))
}

fn records<R: Read>(
    rdr: &mut csv::Reader<R>,
) -> impl Iterator<Item = Result<(u64, csv::StringRecord), IoError>> + '_ {
    rdr.records().enumerate().map(|(i, r)| {
        let row = i as u64 + 1;
        r.map(|rec| (row, rec))
            .map_err(|e| row_error(row, e.to_string()))
    })
}

fn event_fields(e: &TransitionEvent) -> [String; 4] {
    [
        e.start_index.to_string(),
        e.duration.to_string(),
        e.from_state.to_string(),
        e.to_state.to_string(),
    ]
}

fn parse_event(rec: &csv::StringRecord, row: u64) -> Result<TransitionEvent, IoError> {
    Ok(TransitionEvent {
        start_index: field(rec, 0, "start_index", row)?,
        duration: field(rec, 1, "duration", row)?,
        from_state: field(rec, 2, "from_state", row)?,
        to_state: field(rec, 3, "to_state", row)?,
    })
}

/// Writes the map preceded by `# initial_state=` and `# stream_length=`
/// comment lines.
pub fn write_map<W: Write>(mut w: W, map: &TransitionMap) -> Result<(), IoError> {
    writeln!(w, "# initial_state={}", map.initial_state())?;
    writeln!(w, "# stream_length={}", map.stream_length())?;
    writeln!(w, "{MAP_HEADER}")?;
    let mut out = writer(w);
    for e in map.events() {
        out.write_record(event_fields(e))?;
    }
    out.flush()?;
    Ok(())
}

/// Parses and validates a map. Without comment metadata the initial state is
/// the first event's source and the stream ends with the last event.
/// `n_states`, when given, bounds every state id.
pub fn read_map<R: Read>(r: R, n_states: Option<u32>) -> Result<TransitionMap, IoError> {
    let mut buf = BufReader::new(r);
    let mut initial_state = None;
    let mut stream_length = None;
    let mut body = String::new();
    let mut line = String::new();
    loop {
        line.clear();
        if buf.read_line(&mut line)? == 0 {
            break;
        }
        let Some(meta) = line.trim().strip_prefix('#') else {
            body.push_str(&line);
            break;
        };
        let Some((key, value)) = meta.split_once('=') else {
            continue;
        };
        let bad = || IoError::Format(format!("map metadata `{}` is not valid", line.trim()));
        match key.trim() {
            "initial_state" => initial_state = Some(value.trim().parse().map_err(|_| bad())?),
            "stream_length" => stream_length = Some(value.trim().parse().map_err(|_| bad())?),
            _ => {}
        }
    }
    buf.read_to_string(&mut body)?;

    let mut rdr = reader(body.as_bytes());
    expect_header(&mut rdr, MAP_HEADER)?;
    let events = records(&mut rdr)
        .map(|r| r.and_then(|(row, rec)| parse_event(&rec, row)))
        .collect::<Result<Vec<_>, _>>()?;
    let initial_state = match (initial_state, events.first()) {
        (Some(s), _) => s,
        (None, Some(e)) => e.from_state,
        (None, None) => {
            return Err(IoError::Format(
                "map has no events and no `# initial_state=` line".into(),
            ))
        }
    };
    let stream_length = stream_length.unwrap_or_else(|| events.last().map_or(0, |e| e.end()));
    let map = TransitionMap::new(events, initial_state, stream_length)?;
    Ok(match n_states {
        Some(n) => map.with_state_bound(n)?,
        None => map,
    })
}

/// Returns with their per-instance ground-truth annotations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StreamData {
    pub returns: Vec<f64>,
    pub annotations: Vec<Annotation>,
}

pub fn write_stream<W: Write>(w: W, returns: &[f64], annotations: &[Annotation]) -> Result<(), IoError> {
    if returns.len() != annotations.len() {
        return Err(IoError::Format(format!(
            "{} returns but {} annotations",
            returns.len(),
            annotations.len()
        )));
    }
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "{STREAM_HEADER}")?;
    for (i, (r, a)) in returns.iter().zip(annotations).enumerate() {
        let to = a.to_state.map(|s| s.to_string()).unwrap_or_default();
        writeln!(w, "{i},{},{},{to},{}", fmt_f64(*r), a.state, fmt_f64(a.weight))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_stream<R: Read>(r: R) -> Result<StreamData, IoError> {
    let mut rdr = reader(r);
    expect_header(&mut rdr, STREAM_HEADER)?;
    let mut data = StreamData::default();
    for item in records(&mut rdr) {
        let (row, rec) = item?;
        let index: u64 = field(&rec, 0, "index", row)?;
        if index != row - 1 {
            return Err(row_error(row, format!("index {index}, expected {}", row - 1)));
        }
        let to_state = match rec.get(3).unwrap_or("") {
            "" => None,
            _ => Some(field(&rec, 3, "state_to", row)?),
        };
        data.returns.push(field(&rec, 1, "return", row)?);
        data.annotations.push(Annotation {
            state: field(&rec, 2, "state_from", row)?,
            to_state,
            weight: field(&rec, 4, "blend_weight", row)?,
        });
    }
    Ok(data)
}

/// Map events with a drift type derived from the configured durations.
pub fn write_ground_truth<W: Write>(
    w: W,
    events: &[TransitionEvent],
    abrupt: u64,
    gradual: u64,
) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(GROUND_TRUTH_HEADER.split(','))?;
    for e in events {
        let [a, b, c, d] = event_fields(e);
        out.write_record([a, b, c, d, DriftKind::classify(e.duration, abrupt, gradual).as_str().into()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_ground_truth<R: Read>(r: R) -> Result<Vec<(TransitionEvent, DriftKind)>, IoError> {
    let mut rdr = reader(r);
    expect_header(&mut rdr, GROUND_TRUTH_HEADER)?;
    records(&mut rdr)
        .map(|item| {
            let (row, rec) = item?;
            let kind = match rec.get(4).unwrap_or("") {
                "abrupt" => DriftKind::Abrupt,
                "gradual" => DriftKind::Gradual,
                other => return Err(row_error(row, format!("type `{other}` is not abrupt or gradual"))),
            };
            Ok((parse_event(&rec, row)?, kind))
        })
        .collect()
}

pub fn write_features<W: Write>(w: W, table: &FeatureTable) -> Result<(), IoError> {
    let mut w = std::io::BufWriter::new(w);
    writeln!(w, "{}", *FEATURE_HEADER)?;
    let mut line = String::new();
    for row in &table.rows {
        line.clear();
        line.push_str(&row.index.to_string());
        for v in &row.values {
            line.push(',');
            line.push_str(&fmt_f64(*v));
        }
        line.push(',');
        line.push_str(&row.label.to_string());
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_features<R: Read>(r: R) -> Result<FeatureTable, IoError> {
    let mut rdr = reader(r);
    expect_header(&mut rdr, &FEATURE_HEADER)?;
    let rows = records(&mut rdr)
        .map(|item| {
            let (row, rec) = item?;
            let mut values = [0.0; 18];
            for (j, v) in values.iter_mut().enumerate() {
                *v = field(&rec, j + 1, FEATURE_COLUMNS[j], row)?;
            }
            let label: u8 = field(&rec, 19, "label", row)?;
            if label > 1 {
                return Err(row_error(row, format!("label {label} is not 0 or 1")));
            }
            Ok(FeatureRow {
                index: field(&rec, 0, "index", row)?,
                values,
                label,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(FeatureTable { rows })
}
