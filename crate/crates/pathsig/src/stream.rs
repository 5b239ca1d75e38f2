//! Ingestion of raw time series and tick data, and their continuous
//! piecewise-linear embeddings.
//!
//! A [`Stream`] is the raw record: strictly increasing timestamps plus
//! per-channel values, entries possibly missing. [`embed_linear`] turns it
//! into a [`PiecewiseLinearPath`] with one vertex per record, filling gaps by
//! forward fill (leading gaps back-filled from the first observation).
//! [`embed_counting`] turns time-stamped categorical ticks into a monotone
//! counting path: one unit ramp per event, so ordering information survives
//! while the embedding stays continuous and of bounded variation.

use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StreamError {
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("empty input: no data rows")]
    Empty,
    #[error("input needs a time column and at least one value channel")]
    NoChannels,
    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column}: cannot parse {content:?} as a number")]
    NonNumeric {
        row: usize,
        column: usize,
        content: String,
    },
    #[error("row {row}: missing timestamp")]
    MissingTime { row: usize },
    #[error("row {row}: duplicate timestamp")]
    DuplicateTimestamp { row: usize },
    #[error("row {row}: timestamps must be strictly increasing")]
    DecreasingTimestamp { row: usize },
    #[error("row {row}: unknown category label {label:?}")]
    UnknownLabel { row: usize, label: String },
    #[error("malformed delimited input at row {row}: {message}")]
    Malformed { row: usize, message: String },
    #[error("channel {channel} has no observed values")]
    EmptyChannel { channel: usize },
    #[error("times must be strictly increasing")]
    NonIncreasingTimes,
    #[error("path needs at least one vertex")]
    NoVertices,
    #[error("vertices must have dimension >= 1")]
    ZeroDimension,
    #[error("vertex {index} has dimension {found}, expected {expected}")]
    VertexDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value at vertex {index}")]
    NonFinite { index: usize },
    #[error("time {time} lies outside the path span [{start}, {end}]")]
    OutOfSpan { time: f64, start: f64, end: f64 },
    #[error("restriction bounds must satisfy start <= end")]
    BadRestriction,
    #[error("tick table needs at least one category")]
    NoCategories,
    #[error("event {index}: category {found} outside 1..={categories}")]
    CategoryOutOfRange {
        index: usize,
        found: usize,
        categories: usize,
    },
    #[error("event {index}: tick timestamps must be non-decreasing")]
    UnorderedTicks { index: usize },
}

/// Policy for filling missing values during embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Hold the last observed value; leading gaps take the first observation.
    #[default]
    ForwardFill,
}

/// Field separator for delimited text input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    #[default]
    Comma,
    Tab,
}

impl Delimiter {
    fn byte(self) -> u8 {
        match self {
            Delimiter::Comma => b',',
            Delimiter::Tab => b'\t',
        }
    }
}

/// How to read a delimited table: separator and optional header row.
#[derive(Debug, Clone, Copy, Default)]
pub struct TableFormat {
    pub delimiter: Delimiter,
    pub has_header: bool,
}

/// Raw ingested record: strictly increasing timestamps plus per-channel
/// values, entries optionally missing.
#[derive(Debug, Clone, PartialEq)]
pub struct Stream<F: Scalar> {
    times: Vec<F>,
    values: Vec<Vec<Option<F>>>,
    channels: usize,
}

impl<F: Scalar> Stream<F> {
    pub fn new(times: Vec<F>, values: Vec<Vec<Option<F>>>) -> Result<Self, StreamError> {
        if times.is_empty() {
            return Err(StreamError::Empty);
        }
        if times.len() != values.len() {
            return Err(StreamError::VertexDimension {
                index: 0,
                expected: times.len(),
                found: values.len(),
            });
        }
        let channels = values[0].len();
        if channels == 0 {
            return Err(StreamError::NoChannels);
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != channels {
                return Err(StreamError::VertexDimension {
                    index: i,
                    expected: channels,
                    found: row.len(),
                });
            }
            if row.iter().flatten().any(|v| !v.is_finite()) || !times[i].is_finite() {
                return Err(StreamError::NonFinite { index: i });
            }
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(StreamError::NonIncreasingTimes);
        }
        for c in 0..channels {
            if values.iter().all(|row| row[c].is_none()) {
                return Err(StreamError::EmptyChannel { channel: c + 1 });
            }
        }
        Ok(Self {
            times,
            values,
            channels,
        })
    }

    pub fn times(&self) -> &[F] {
        &self.times
    }

    pub fn values(&self) -> &[Vec<Option<F>>] {
        &self.values
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one record
    }
}

/// Parse delimited text: first column time, remaining columns channels,
/// empty cells missing. Errors carry 1-based file row numbers.
pub fn parse_table<F: Scalar>(bytes: &[u8], format: TableFormat) -> Result<Stream<F>, StreamError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(format.has_header)
        .delimiter(format.delimiter.byte())
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let mut times: Vec<F> = Vec::new();
    let mut values: Vec<Vec<Option<F>>> = Vec::new();
    let mut expected_cols: Option<usize> = None;
    for record in reader.records() {
        let record = record.map_err(|e| StreamError::Malformed {
            row: e
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or(times.len() + 1),
            message: e.to_string(),
        })?;
        let row = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(times.len() + 1);
        if record.len() == 1 && record.get(0) == Some("") {
            continue; // blank line
        }
        let expected = *expected_cols.get_or_insert(record.len());
        if record.len() != expected {
            return Err(StreamError::RaggedRow {
                row,
                expected,
                found: record.len(),
            });
        }
        if expected < 2 {
            return Err(StreamError::NoChannels);
        }
        let time_cell = record.get(0).unwrap_or("");
        if time_cell.is_empty() {
            return Err(StreamError::MissingTime { row });
        }
        let t = parse_cell::<F>(time_cell, row, 1)?;
        if let Some(&last) = times.last() {
            if t == last {
                return Err(StreamError::DuplicateTimestamp { row });
            }
            if t < last {
                return Err(StreamError::DecreasingTimestamp { row });
            }
        }
        let mut row_values = Vec::with_capacity(expected - 1);
        for col in 1..expected {
            let cell = record.get(col).unwrap_or("");
            if cell.is_empty() {
                row_values.push(None);
            } else {
                row_values.push(Some(parse_cell::<F>(cell, row, col + 1)?));
            }
        }
        times.push(t);
        values.push(row_values);
    }
    Stream::new(times, values)
}

fn parse_cell<F: Scalar>(cell: &str, row: usize, column: usize) -> Result<F, StreamError> {
    let parsed = f64::from_str(cell).map_err(|_| StreamError::NonNumeric {
        row,
        column,
        content: cell.to_string(),
    })?;
    Ok(F::from_f64_lossy(parsed))
}

/// Continuous piecewise-linear embedding X: [t_0, t_T] -> R^d, stored as its
/// ordered vertices. A single vertex represents a constant point path.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearPath<F: Scalar> {
    times: Vec<F>,
    points: Vec<Vec<F>>,
}

impl<F: Scalar> PiecewiseLinearPath<F> {
    pub fn new(times: Vec<F>, points: Vec<Vec<F>>) -> Result<Self, StreamError> {
        if times.is_empty() || points.is_empty() {
            return Err(StreamError::NoVertices);
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(StreamError::ZeroDimension);
        }
        if times.len() != points.len() {
            return Err(StreamError::VertexDimension {
                index: 0,
                expected: times.len(),
                found: points.len(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(StreamError::VertexDimension {
                    index: i,
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) || !times[i].is_finite() {
                return Err(StreamError::NonFinite { index: i });
            }
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(StreamError::NonIncreasingTimes);
        }
        Ok(Self { times, points })
    }

    /// Vertices at unit-spaced parameter times 0, 1, 2, …
    pub fn from_points(points: Vec<Vec<F>>) -> Result<Self, StreamError> {
        let times = (0..points.len()).map(F::from_count).collect();
        Self::new(times, points)
    }

    pub fn times(&self) -> &[F] {
        &self.times
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn num_vertices(&self) -> usize {
        self.times.len()
    }

    pub fn num_segments(&self) -> usize {
        self.times.len() - 1
    }

    /// Parameter interval covered by the path.
    pub fn span(&self) -> (F, F) {
        (self.times[0], *self.times.last().unwrap())
    }

    /// Total variation: the sum of segment lengths.
    pub fn total_variation(&self) -> F {
        let mut tv = F::zero();
        for seg in self.points.windows(2) {
            let mut sq = F::zero();
            for (a, b) in seg[0].iter().zip(&seg[1]) {
                let diff = *b - *a;
                sq = sq + diff * diff;
            }
            tv = tv + sq.sqrt();
        }
        tv
    }

    /// Value of the path at parameter `t` by linear interpolation.
    pub fn value_at(&self, t: F) -> Result<Vec<F>, StreamError> {
        let (start, end) = self.span();
        if t < start || t > end {
            return Err(StreamError::OutOfSpan {
                time: t.as_f64(),
                start: start.as_f64(),
                end: end.as_f64(),
            });
        }
        // exact vertex hits return the stored point, no roundoff
        if let Some(i) = self.times.iter().position(|&u| u == t) {
            return Ok(self.points[i].clone());
        }
        let j = match self.times.iter().position(|&u| u > t) {
            Some(j) => j - 1,
            None => self.times.len() - 2,
        };
        let alpha = (t - self.times[j]) / (self.times[j + 1] - self.times[j]);
        Ok(self.points[j]
            .iter()
            .zip(&self.points[j + 1])
            .map(|(&a, &b)| a + alpha * (b - a))
            .collect())
    }

    /// Same geometric image with extra vertices inserted by linear
    /// interpolation at the given parameter times. Times already present are
    /// skipped; out-of-span times are an error.
    pub fn with_inserted_times(&self, extra: &[F]) -> Result<Self, StreamError> {
        let mut times = self.times.clone();
        let mut points = self.points.clone();
        for &t in extra {
            let value = self.value_at(t)?;
            match times.binary_search_by(|u| u.partial_cmp(&t).expect("finite times")) {
                Ok(_) => {}
                Err(pos) => {
                    times.insert(pos, t);
                    points.insert(pos, value);
                }
            }
        }
        Self::new(times, points)
    }

    /// Restriction of the path to `[a, b]`, endpoints interpolated. `a == b`
    /// yields a single-vertex constant path.
    pub fn restrict(&self, a: F, b: F) -> Result<Self, StreamError> {
        if a > b {
            return Err(StreamError::BadRestriction);
        }
        let first = self.value_at(a)?;
        if a == b {
            return Self::new(vec![a], vec![first]);
        }
        let last = self.value_at(b)?;
        let mut times = vec![a];
        let mut points = vec![first];
        for (i, &t) in self.times.iter().enumerate() {
            if t > a && t < b {
                times.push(t);
                points.push(self.points[i].clone());
            }
        }
        times.push(b);
        points.push(last);
        Self::new(times, points)
    }

    /// The same image traversed backwards, reparameterized over the same
    /// span.
    pub fn reversed(&self) -> Self {
        let (start, end) = self.span();
        let times = self
            .times
            .iter()
            .rev()
            .map(|&t| start + (end - t))
            .collect();
        let points = self.points.iter().rev().cloned().collect();
        Self::new(times, points).expect("reversal preserves invariants")
    }
}

/// Time-stamped categorical tick events with category ids in 1..=C.
#[derive(Debug, Clone, PartialEq)]
pub struct TickTable<F: Scalar> {
    events: Vec<(F, usize)>,
    categories: usize,
}

impl<F: Scalar> TickTable<F> {
    pub fn new(events: Vec<(F, usize)>, categories: usize) -> Result<Self, StreamError> {
        if categories == 0 {
            return Err(StreamError::NoCategories);
        }
        for (i, &(t, cat)) in events.iter().enumerate() {
            if cat == 0 || cat > categories {
                return Err(StreamError::CategoryOutOfRange {
                    index: i,
                    found: cat,
                    categories,
                });
            }
            if i > 0 && t < events[i - 1].0 {
                return Err(StreamError::UnorderedTicks { index: i });
            }
        }
        Ok(Self { events, categories })
    }

    pub fn events(&self) -> &[(F, usize)] {
        &self.events
    }

    pub fn categories(&self) -> usize {
        self.categories
    }
}

/// Parse two-column tick text (time, category label) against a fixed label
/// dictionary; category ids are 1-based positions in `labels`.
pub fn parse_ticks<F: Scalar>(
    bytes: &[u8],
    labels: &[&str],
    format: TableFormat,
) -> Result<TickTable<F>, StreamError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(format.has_header)
        .delimiter(format.delimiter.byte())
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut events = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| StreamError::Malformed {
            row: e
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or(events.len() + 1),
            message: e.to_string(),
        })?;
        let row = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(events.len() + 1);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != 2 {
            return Err(StreamError::RaggedRow {
                row,
                expected: 2,
                found: record.len(),
            });
        }
        let t = parse_cell::<F>(record.get(0).unwrap_or(""), row, 1)?;
        let label = record.get(1).unwrap_or("");
        let cat =
            labels
                .iter()
                .position(|&l| l == label)
                .ok_or_else(|| StreamError::UnknownLabel {
                    row,
                    label: label.to_string(),
                })?
                + 1;
        events.push((t, cat));
    }
    TickTable::new(events, labels.len())
}

/// Embed a stream as a piecewise-linear path with one vertex per record.
///
/// Missing entries are filled per `policy`; leading gaps are back-filled from
/// the channel's first observation. With `time_augment` the timestamp is
/// included as channel 1 and the path dimension grows by one.
pub fn embed_linear<F: Scalar>(
    stream: &Stream<F>,
    policy: MissingPolicy,
    time_augment: bool,
) -> Result<PiecewiseLinearPath<F>, StreamError> {
    let channels = stream.channels();
    let mut filled = vec![vec![F::zero(); stream.len()]; channels];
    for c in 0..channels {
        let first = stream
            .values()
            .iter()
            .find_map(|row| row[c])
            .ok_or(StreamError::EmptyChannel { channel: c + 1 })?;
        let MissingPolicy::ForwardFill = policy;
        let mut last = first;
        for (j, row) in stream.values().iter().enumerate() {
            if let Some(v) = row[c] {
                last = v;
            }
            filled[c][j] = last;
        }
    }
    let points = (0..stream.len())
        .map(|j| {
            let mut p = Vec::with_capacity(channels + usize::from(time_augment));
            if time_augment {
                p.push(stream.times()[j]);
            }
            p.extend((0..channels).map(|c| filled[c][j]));
            p
        })
        .collect();
    PiecewiseLinearPath::new(stream.times().to_vec(), points)
}

/// Embed tick events as a counting path: C-dimensional, one unit ramp per
/// event, parameterized by event index. N events yield N+1 vertices starting
/// at the origin; coordinate c counts occurrences of category c so far.
pub fn embed_counting<F: Scalar>(ticks: &TickTable<F>) -> PiecewiseLinearPath<F> {
    let c = ticks.categories();
    let mut points = Vec::with_capacity(ticks.events().len() + 1);
    let mut current = vec![F::zero(); c];
    points.push(current.clone());
    for &(_, cat) in ticks.events() {
        current[cat - 1] = current[cat - 1] + F::one();
        points.push(current.clone());
    }
    PiecewiseLinearPath::from_points(points).expect("counting vertices are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fmt() -> TableFormat {
        TableFormat::default()
    }

    #[test]
    fn parses_simple_table() {
        let s = parse_table::<f64>(b"0,1.0\n1,2.0", fmt()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.channels(), 1);
        assert_eq!(s.times(), &[0.0, 1.0]);
        assert_eq!(s.values()[1][0], Some(2.0));
    }

    #[test]
    fn duplicate_timestamp_reports_row() {
        assert_eq!(
            parse_table::<f64>(b"0,1.0\n0,2.0", fmt()).unwrap_err(),
            StreamError::DuplicateTimestamp { row: 2 }
        );
        assert_eq!(
            parse_table::<f64>(b"0,1.0\n-1,2.0", fmt()).unwrap_err(),
            StreamError::DecreasingTimestamp { row: 2 }
        );
    }

    #[test]
    fn missing_cells_become_none() {
        let s = parse_table::<f64>(b"0,\n1,2.0", fmt()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.values()[0][0], None);
        assert_eq!(s.values()[1][0], Some(2.0));
    }

    #[test]
    fn ragged_and_nonnumeric_rows_report_position() {
        assert_eq!(
            parse_table::<f64>(b"0,1.0\n1,2.0,3.0", fmt()).unwrap_err(),
            StreamError::RaggedRow {
                row: 2,
                expected: 2,
                found: 3
            }
        );
        assert_eq!(
            parse_table::<f64>(b"0,1.0\n1,abc", fmt()).unwrap_err(),
            StreamError::NonNumeric {
                row: 2,
                column: 2,
                content: "abc".into()
            }
        );
    }

    #[test]
    fn header_and_tab_delimiter() {
        let format = TableFormat {
            delimiter: Delimiter::Tab,
            has_header: true,
        };
        let s = parse_table::<f64>(b"t\tx\n0\t1.5\n2\t2.5", format).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.values()[0][0], Some(1.5));
    }

    #[test]
    fn fully_missing_channel_is_an_error() {
        assert_eq!(
            parse_table::<f64>(b"0,,1\n1,,2", fmt()).unwrap_err(),
            StreamError::EmptyChannel { channel: 1 }
        );
    }

    #[test]
    fn embed_fully_observed_is_lossless() {
        let s = parse_table::<f64>(b"0,1.0,5.0\n1,2.0,6.0\n3,3.0,7.0", fmt()).unwrap();
        let p = embed_linear(&s, MissingPolicy::ForwardFill, false).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.times(), &[0.0, 1.0, 3.0]);
        assert_eq!(p.points()[0], vec![1.0, 5.0]);
        assert_eq!(p.points()[2], vec![3.0, 7.0]);
    }

    #[test]
    fn forward_fill_and_leading_backfill() {
        let s = parse_table::<f64>(b"0,1\n1,\n2,3", fmt()).unwrap();
        let p = embed_linear(&s, MissingPolicy::ForwardFill, false).unwrap();
        assert_eq!(
            p.points().iter().map(|p| p[0]).collect::<Vec<_>>(),
            vec![1.0, 1.0, 3.0]
        );
        let s = parse_table::<f64>(b"0,\n1,2", fmt()).unwrap();
        let p = embed_linear(&s, MissingPolicy::ForwardFill, false).unwrap();
        assert_eq!(
            p.points().iter().map(|p| p[0]).collect::<Vec<_>>(),
            vec![2.0, 2.0]
        );
    }

    #[test]
    fn time_augmentation_prepends_time_channel() {
        let s = parse_table::<f64>(b"0,1\n2,3", fmt()).unwrap();
        let p = embed_linear(&s, MissingPolicy::ForwardFill, true).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.points()[1], vec![2.0, 3.0]);
    }

    #[test]
    fn counting_path_accumulates_events() {
        let ticks = TickTable::new(vec![(1.0, 1), (2.0, 2), (3.0, 3)], 3).unwrap();
        let p = embed_counting(&ticks);
        assert_eq!(
            p.points(),
            &[
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![1.0, 1.0, 0.0],
                vec![1.0, 1.0, 1.0]
            ]
        );
        let ticks = TickTable::new(vec![(1.0, 2), (2.0, 1)], 2).unwrap();
        let p = embed_counting(&ticks);
        assert_eq!(
            p.points(),
            &[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]
        );
    }

    #[test]
    fn empty_tick_table_gives_constant_path() {
        let ticks = TickTable::<f64>::new(vec![], 3).unwrap();
        let p = embed_counting(&ticks);
        assert_eq!(p.num_vertices(), 1);
        assert_eq!(p.points()[0], vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn counting_path_is_monotone_with_final_counts() {
        let ticks = TickTable::new(vec![(0.0, 2), (0.0, 2), (1.0, 1), (4.0, 2)], 2).unwrap();
        let p = embed_counting(&ticks);
        for c in 0..2 {
            for pair in p.points().windows(2) {
                assert!(pair[1][c] >= pair[0][c]);
            }
        }
        assert_eq!(p.points().last().unwrap(), &vec![1.0, 3.0]);
    }

    #[test]
    fn tick_validation() {
        assert!(matches!(
            TickTable::<f64>::new(vec![(0.0, 3)], 2),
            Err(StreamError::CategoryOutOfRange { .. })
        ));
        assert!(matches!(
            TickTable::<f64>::new(vec![(1.0, 1), (0.5, 1)], 2),
            Err(StreamError::UnorderedTicks { index: 1 })
        ));
    }

    #[test]
    fn parse_ticks_maps_labels() {
        let t = parse_ticks::<f64>(
            b"1,call\n2,trade\n3,move",
            &["call", "trade", "move"],
            fmt(),
        )
        .unwrap();
        assert_eq!(t.events(), &[(1.0, 1), (2.0, 2), (3.0, 3)]);
        assert_eq!(
            parse_ticks::<f64>(b"1,call\n2,sell", &["call", "trade", "move"], fmt()).unwrap_err(),
            StreamError::UnknownLabel {
                row: 2,
                label: "sell".into()
            }
        );
    }

    #[test]
    fn insert_midpoint() {
        let p =
            PiecewiseLinearPath::new(vec![0.0, 1.0], vec![vec![0.0, 0.0], vec![2.0, 2.0]]).unwrap();
        let q = p.with_inserted_times(&[0.5]).unwrap();
        assert_eq!(q.num_vertices(), 3);
        assert_eq!(q.points()[1], vec![1.0, 1.0]);
        // inserting an existing time changes nothing
        assert_eq!(p.with_inserted_times(&[1.0]).unwrap(), p);
        // out-of-span times are rejected
        assert!(matches!(
            p.with_inserted_times(&[1.5]),
            Err(StreamError::OutOfSpan { .. })
        ));
    }

    #[test]
    fn insertion_preserves_total_variation() {
        let p = PiecewiseLinearPath::<f64>::new(
            vec![0.0, 1.0, 2.5],
            vec![vec![0.0, 0.0], vec![1.0, -1.0], vec![2.0, 3.0]],
        )
        .unwrap();
        let q = p.with_inserted_times(&[0.25, 0.5, 1.75, 2.0]).unwrap();
        assert!((p.total_variation() - q.total_variation()).abs() <= 1e-12);
    }

    #[test]
    fn restrict_and_reverse() {
        let p =
            PiecewiseLinearPath::new(vec![0.0, 1.0, 2.0], vec![vec![0.0], vec![2.0], vec![1.0]])
                .unwrap();
        let r = p.restrict(0.5, 1.5).unwrap();
        assert_eq!(r.times(), &[0.5, 1.0, 1.5]);
        assert_eq!(r.points(), &[vec![1.0], vec![2.0], vec![1.5]]);
        let point = p.restrict(0.5, 0.5).unwrap();
        assert_eq!(point.num_vertices(), 1);

        let rev = p.reversed();
        assert_eq!(rev.times(), &[0.0, 1.0, 2.0]);
        assert_eq!(rev.points(), &[vec![1.0], vec![2.0], vec![0.0]]);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            PiecewiseLinearPath::<f64>::new(vec![0.0], vec![vec![]]),
            Err(StreamError::ZeroDimension)
        ));
    }
}
