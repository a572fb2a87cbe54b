//! Observed data model: per-record rows, per-subject histories, arms and
//! two-arm studies, plus CSV ingestion.
//!
//! Wire format (header required):
//!
//! ```text
//! id,time,status,arm[,event_type][,w1,...,wp]
//! ```
//!
//! `status` is 0 (censored), 1 (recurrent event) or 2 (terminal event);
//! `arm` is 1 or 2. Every subject has exactly one status 0/2 row, whose time
//! is the follow-up `X`. Covariate columns are baseline values and must be
//! filled on every row.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    Censor = 0,
    Event = 1,
    Death = 2,
}

impl Status {
    pub fn from_code(code: i64) -> Result<Self> {
        match code {
            0 => Ok(Status::Censor),
            1 => Ok(Status::Event),
            2 => Ok(Status::Death),
            other => Err(Error::UnknownStatus(other)),
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Treatment arm; serialized as its label 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Arm {
    One,
    Two,
}

impl Arm {
    pub fn from_label(label: i64) -> Result<Self> {
        match label {
            1 => Ok(Arm::One),
            2 => Ok(Arm::Two),
            other => Err(Error::UnknownArm(other)),
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Arm::One => 1,
            Arm::Two => 2,
        }
    }

    pub fn other(self) -> Arm {
        match self {
            Arm::One => Arm::Two,
            Arm::Two => Arm::One,
        }
    }
}

impl From<Arm> for u8 {
    fn from(arm: Arm) -> u8 {
        arm.label()
    }
}

impl TryFrom<u8> for Arm {
    type Error = Error;

    fn try_from(label: u8) -> Result<Arm> {
        Arm::from_label(label as i64)
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// One row of the long-format input.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub subject_id: String,
    pub time: f64,
    pub status: Status,
    pub arm: Arm,
    pub event_type: Option<u32>,
    pub covariates: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub event_type: Option<u32>,
}

/// A subject's observed history: follow-up `X = min(D, C)`, the terminal
/// indicator `δ = 1{D <= C}`, recurrent event times on `[0, X]` and the
/// baseline covariates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectHistory {
    pub subject_id: String,
    pub follow_up: f64,
    pub terminal: bool,
    pub events: Vec<Event>,
    pub covariates: Vec<f64>,
}

impl SubjectHistory {
    /// Builds a history, sorting events by time. Fails if any time is
    /// negative, non-finite or later than `follow_up`.
    pub fn new(
        subject_id: impl Into<String>,
        follow_up: f64,
        terminal: bool,
        mut events: Vec<Event>,
        covariates: Vec<f64>,
    ) -> Result<Self> {
        let subject_id = subject_id.into();
        check_time(&subject_id, follow_up)?;
        for ev in &events {
            check_time(&subject_id, ev.time)?;
            if ev.time > follow_up {
                return Err(Error::EventAfterFollowUp {
                    id: subject_id,
                    time: ev.time,
                    follow_up,
                });
            }
        }
        if covariates.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFiniteCovariate { id: subject_id });
        }
        sort_events(&mut events);
        Ok(SubjectHistory {
            subject_id,
            follow_up,
            terminal,
            events,
            covariates,
        })
    }

    /// Convenience constructor for untyped events without covariates.
    pub fn simple(
        subject_id: impl Into<String>,
        follow_up: f64,
        terminal: bool,
        event_times: &[f64],
    ) -> Result<Self> {
        let events = event_times
            .iter()
            .map(|&time| Event {
                time,
                event_type: None,
            })
            .collect();
        Self::new(subject_id, follow_up, terminal, events, Vec::new())
    }

    pub fn event_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.events.iter().map(|e| e.time)
    }

    /// Copy of this history with the terminal event (if observed) appended
    /// as an ordinary event of the given type.
    pub fn with_terminal_as_event(&self, event_type: Option<u32>) -> SubjectHistory {
        let mut out = self.clone();
        if self.terminal {
            out.events.push(Event {
                time: self.follow_up,
                event_type,
            });
            sort_events(&mut out.events);
        }
        out
    }
}

fn check_time(id: &str, time: f64) -> Result<()> {
    if !time.is_finite() || time < 0.0 {
        return Err(Error::InvalidTime {
            id: id.to_string(),
            time,
        });
    }
    Ok(())
}

fn sort_events(events: &mut [Event]) {
    events.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then_with(|| a.event_type.cmp(&b.event_type))
    });
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmDataset {
    pub arm: Arm,
    subjects: Vec<SubjectHistory>,
}

impl ArmDataset {
    pub fn new(arm: Arm, subjects: Vec<SubjectHistory>) -> Result<Self> {
        let Some(first) = subjects.first() else {
            return Err(Error::EmptyArm(arm));
        };
        let p = first.covariates.len();
        for s in &subjects {
            if s.covariates.len() != p {
                return Err(Error::CovariateDimension {
                    id: s.subject_id.clone(),
                    expected: p,
                    found: s.covariates.len(),
                });
            }
        }
        Ok(ArmDataset { arm, subjects })
    }

    pub fn subjects(&self) -> &[SubjectHistory] {
        &self.subjects
    }

    pub fn len(&self) -> usize {
        self.subjects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subjects.is_empty()
    }

    pub fn covariate_dim(&self) -> usize {
        self.subjects[0].covariates.len()
    }

    pub fn max_follow_up(&self) -> f64 {
        self.subjects
            .iter()
            .map(|s| s.follow_up)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn total_events(&self) -> usize {
        self.subjects.iter().map(|s| s.events.len()).sum()
    }

    /// Every observed terminal event re-entered as a recurrent event.
    pub fn with_terminal_as_event(&self, event_type: Option<u32>) -> ArmDataset {
        ArmDataset {
            arm: self.arm,
            subjects: self
                .subjects
                .iter()
                .map(|s| s.with_terminal_as_event(event_type))
                .collect(),
        }
    }

    /// Same subjects with a new arm label.
    pub fn relabel(&self, arm: Arm) -> ArmDataset {
        ArmDataset {
            arm,
            subjects: self.subjects.clone(),
        }
    }

    /// Keeps only the covariate columns at `columns`, in that order.
    pub fn select_covariates(&self, columns: &[usize]) -> ArmDataset {
        ArmDataset {
            arm: self.arm,
            subjects: self
                .subjects
                .iter()
                .map(|s| SubjectHistory {
                    covariates: columns.iter().map(|&c| s.covariates[c]).collect(),
                    ..s.clone()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyDataset {
    pub arm1: ArmDataset,
    pub arm2: ArmDataset,
    pub tau: f64,
}

impl StudyDataset {
    pub fn new(arm1: ArmDataset, arm2: ArmDataset, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidTau(tau));
        }
        let (p1, p2) = (arm1.covariate_dim(), arm2.covariate_dim());
        if p1 != p2 {
            return Err(Error::CovariateDimension {
                id: arm2.subjects[0].subject_id.clone(),
                expected: p1,
                found: p2,
            });
        }
        Ok(StudyDataset {
            arm1: arm1.relabel(Arm::One),
            arm2: arm2.relabel(Arm::Two),
            tau,
        })
    }

    pub fn arm(&self, arm: Arm) -> &ArmDataset {
        match arm {
            Arm::One => &self.arm1,
            Arm::Two => &self.arm2,
        }
    }

    pub fn n(&self) -> usize {
        self.arm1.len() + self.arm2.len()
    }

    /// Allocation fraction `n_j / n`.
    pub fn fraction(&self, arm: Arm) -> f64 {
        self.arm(arm).len() as f64 / self.n() as f64
    }

    pub fn covariate_dim(&self) -> usize {
        self.arm1.covariate_dim()
    }

    pub fn with_tau(&self, tau: f64) -> Result<StudyDataset> {
        StudyDataset::new(self.arm1.clone(), self.arm2.clone(), tau)
    }

    /// Arms exchanged: the old arm 2 becomes arm 1.
    pub fn swapped(&self) -> StudyDataset {
        StudyDataset {
            arm1: self.arm2.relabel(Arm::One),
            arm2: self.arm1.relabel(Arm::Two),
            tau: self.tau,
        }
    }

    pub fn select_covariates(&self, columns: &[usize]) -> StudyDataset {
        StudyDataset {
            arm1: self.arm1.select_covariates(columns),
            arm2: self.arm2.select_covariates(columns),
            tau: self.tau,
        }
    }

    /// Flattens back to long-format records (terminal/censor row last per
    /// subject).
    pub fn to_records(&self) -> Vec<EventRecord> {
        let mut out = Vec::new();
        for arm in [&self.arm1, &self.arm2] {
            for s in arm.subjects() {
                for ev in &s.events {
                    out.push(EventRecord {
                        subject_id: s.subject_id.clone(),
                        time: ev.time,
                        status: Status::Event,
                        arm: arm.arm,
                        event_type: ev.event_type,
                        covariates: s.covariates.clone(),
                    });
                }
                out.push(EventRecord {
                    subject_id: s.subject_id.clone(),
                    time: s.follow_up,
                    status: if s.terminal {
                        Status::Death
                    } else {
                        Status::Censor
                    },
                    arm: arm.arm,
                    event_type: None,
                    covariates: s.covariates.clone(),
                });
            }
        }
        out
    }
}

/// Groups records by subject into per-arm datasets, ordered by arm and
/// then by subject id. Arms with no records are absent from the map.
pub fn group_records(records: &[EventRecord]) -> Result<BTreeMap<Arm, ArmDataset>> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }

    struct Pending<'a> {
        arm: Arm,
        terminal: Option<&'a EventRecord>,
        events: Vec<Event>,
        covariates: Option<&'a [f64]>,
    }

    let mut by_subject: BTreeMap<&str, Pending> = BTreeMap::new();
    for rec in records {
        check_time(&rec.subject_id, rec.time)?;
        let entry = by_subject
            .entry(rec.subject_id.as_str())
            .or_insert_with(|| Pending {
                arm: rec.arm,
                terminal: None,
                events: Vec::new(),
                covariates: None,
            });
        if entry.arm != rec.arm {
            return Err(Error::SubjectInBothArms(rec.subject_id.clone()));
        }
        match entry.covariates {
            None => entry.covariates = Some(&rec.covariates),
            Some(prev) if prev != rec.covariates.as_slice() => {
                if prev.len() != rec.covariates.len() {
                    return Err(Error::CovariateDimension {
                        id: rec.subject_id.clone(),
                        expected: prev.len(),
                        found: rec.covariates.len(),
                    });
                }
                return Err(Error::InconsistentCovariates(rec.subject_id.clone()));
            }
            Some(_) => {}
        }
        match rec.status {
            Status::Event => entry.events.push(Event {
                time: rec.time,
                event_type: rec.event_type,
            }),
            Status::Censor | Status::Death => {
                if entry.terminal.is_some() {
                    return Err(Error::DuplicateTerminal(rec.subject_id.clone()));
                }
                entry.terminal = Some(rec);
            }
        }
    }

    let mut arms: BTreeMap<Arm, Vec<SubjectHistory>> = BTreeMap::new();
    for (id, pending) in by_subject {
        let Some(term) = pending.terminal else {
            return Err(Error::MissingTerminal(id.to_string()));
        };
        let subject = SubjectHistory::new(
            id,
            term.time,
            term.status == Status::Death,
            pending.events,
            pending.covariates.unwrap_or_default().to_vec(),
        )?;
        arms.entry(pending.arm).or_default().push(subject);
    }

    let mut out = BTreeMap::new();
    let mut dim: Option<usize> = None;
    for (arm, subjects) in arms {
        let ds = ArmDataset::new(arm, subjects)?;
        match dim {
            None => dim = Some(ds.covariate_dim()),
            Some(p) if p != ds.covariate_dim() => {
                return Err(Error::CovariateDimension {
                    id: ds.subjects[0].subject_id.clone(),
                    expected: p,
                    found: ds.covariate_dim(),
                })
            }
            Some(_) => {}
        }
        out.insert(arm, ds);
    }
    Ok(out)
}

/// Builds a two-arm study from long-format records.
pub fn ingest_records(records: &[EventRecord], tau: f64) -> Result<StudyDataset> {
    let mut arms = group_records(records)?;
    let arm1 = arms.remove(&Arm::One).ok_or(Error::EmptyArm(Arm::One))?;
    let arm2 = arms.remove(&Arm::Two).ok_or(Error::EmptyArm(Arm::Two))?;
    StudyDataset::new(arm1, arm2, tau)
}

#[derive(Debug, Clone, PartialEq)]
pub enum TruncationReport {
    Ok,
    /// Arms whose largest follow-up falls short of tau.
    Warn(Vec<(Arm, f64)>),
}

impl TruncationReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, TruncationReport::Ok)
    }

    pub fn messages(&self, tau: f64) -> Vec<String> {
        match self {
            TruncationReport::Ok => Vec::new(),
            TruncationReport::Warn(arms) => arms
                .iter()
                .map(|(arm, max_x)| {
                    format!(
                        "arm {arm}: largest follow-up {max_x} < tau {tau}; curves are extrapolated flat"
                    )
                })
                .collect(),
        }
    }
}

/// The MCF is identifiable on `[0, tau]` only if some subject is still
/// under observation at `tau` (`X >= tau`) in each arm.
pub fn validate_truncation(study: &StudyDataset, strict: bool) -> Result<TruncationReport> {
    validate_arms_truncation([&study.arm1, &study.arm2], study.tau, strict)
}

pub fn validate_arms_truncation<'a>(
    arms: impl IntoIterator<Item = &'a ArmDataset>,
    tau: f64,
    strict: bool,
) -> Result<TruncationReport> {
    let mut short = Vec::new();
    for arm in arms {
        let max_x = arm.max_follow_up();
        if max_x < tau {
            if strict {
                return Err(Error::TruncationBeyondFollowUp {
                    arm: arm.arm,
                    tau,
                    max_follow_up: max_x,
                });
            }
            short.push((arm.arm, max_x));
        }
    }
    Ok(if short.is_empty() {
        TruncationReport::Ok
    } else {
        TruncationReport::Warn(short)
    })
}

/// Column layout of a parsed CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvLayout {
    pub has_event_type: bool,
    pub covariate_names: Vec<String>,
}

pub fn read_records_csv<R: Read>(reader: R) -> Result<(CsvLayout, Vec<EventRecord>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let names: Vec<&str> = headers.iter().collect();
    let expected = ["id", "time", "status", "arm"];
    if names.len() < 4 || names[..4] != expected {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "header must start with id,time,status,arm; found {}",
                names.join(",")
            ),
        });
    }
    let has_event_type = names.get(4) == Some(&"event_type");
    let cov_start = if has_event_type { 5 } else { 4 };
    let layout = CsvLayout {
        has_event_type,
        covariate_names: names[cov_start..].iter().map(|s| s.to_string()).collect(),
    };

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |message: String| Error::Parse { line, message };
        let field = |i: usize| row.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            let s = field(i);
            s.parse::<f64>()
                .map_err(|_| bad(format!("column {}: expected a number, got {s:?}", names[i])))
        };
        let int = |i: usize| -> Result<i64> {
            let s = field(i);
            s.parse::<i64>()
                .map_err(|_| bad(format!("column {}: expected an integer, got {s:?}", names[i])))
        };

        let subject_id = field(0).to_string();
        if subject_id.is_empty() {
            return Err(bad("empty subject id".into()));
        }
        let time = num(1)?;
        let status = Status::from_code(int(2)?)?;
        let arm = Arm::from_label(int(3)?)?;
        let event_type = if has_event_type && !field(4).is_empty() {
            let t = int(4)?;
            Some(u32::try_from(t).map_err(|_| bad(format!("event_type {t} out of range")))?)
        } else {
            None
        };
        let covariates = (cov_start..names.len())
            .map(|i| {
                if field(i).is_empty() {
                    Err(bad(format!("missing covariate {}", names[i])))
                } else {
                    num(i)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(EventRecord {
            subject_id,
            time,
            status,
            arm,
            event_type,
            covariates,
        });
    }
    Ok((layout, records))
}

pub fn write_records_csv<W: Write>(
    writer: W,
    layout: &CsvLayout,
    records: &[EventRecord],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["id", "time", "status", "arm"];
    if layout.has_event_type {
        header.push("event_type");
    }
    header.extend(layout.covariate_names.iter().map(String::as_str));
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.subject_id.clone(),
            r.time.to_string(),
            r.status.code().to_string(),
            r.arm.label().to_string(),
        ];
        if layout.has_event_type {
            row.push(r.event_type.map(|t| t.to_string()).unwrap_or_default());
        }
        row.extend(r.covariates.iter().map(|w| w.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, time: f64, status: Status, arm: Arm) -> EventRecord {
        EventRecord {
            subject_id: id.into(),
            time,
            status,
            arm,
            event_type: None,
            covariates: vec![],
        }
    }

    #[test]
    fn regroups_event_and_death() {
        let arms = group_records(&[
            rec("s1", 2.0, Status::Event, Arm::One),
            rec("s1", 10.0, Status::Death, Arm::One),
        ])
        .unwrap();
        let s = &arms[&Arm::One].subjects()[0];
        assert_eq!(s.follow_up, 10.0);
        assert!(s.terminal);
        assert_eq!(s.event_times().collect::<Vec<_>>(), vec![2.0]);
    }

    #[test]
    fn censor_only_subject() {
        let arms = group_records(&[rec("s2", 8.0, Status::Censor, Arm::One)]).unwrap();
        let s = &arms[&Arm::One].subjects()[0];
        assert_eq!((s.follow_up, s.terminal, s.events.len()), (8.0, false, 0));
    }

    #[test]
    fn missing_terminal_row() {
        let err = group_records(&[rec("s3", 5.0, Status::Event, Arm::One)]).unwrap_err();
        assert!(matches!(err, Error::MissingTerminal(ref id) if id == "s3"));
        assert!(err.to_string().contains("missing terminal/censor record"));
    }

    #[test]
    fn rejects_bad_rows() {
        let two_terminals = [
            rec("a", 3.0, Status::Censor, Arm::One),
            rec("a", 4.0, Status::Death, Arm::One),
        ];
        assert!(matches!(
            group_records(&two_terminals),
            Err(Error::DuplicateTerminal(_))
        ));
        let late_event = [
            rec("a", 5.0, Status::Event, Arm::One),
            rec("a", 4.0, Status::Death, Arm::One),
        ];
        assert!(matches!(
            group_records(&late_event),
            Err(Error::EventAfterFollowUp { .. })
        ));
        let negative = [rec("a", -1.0, Status::Censor, Arm::One)];
        assert!(matches!(
            group_records(&negative),
            Err(Error::InvalidTime { .. })
        ));
        let both_arms = [
            rec("a", 1.0, Status::Event, Arm::One),
            rec("a", 4.0, Status::Death, Arm::Two),
        ];
        assert!(matches!(
            group_records(&both_arms),
            Err(Error::SubjectInBothArms(_))
        ));
        assert!(matches!(Status::from_code(7), Err(Error::UnknownStatus(7))));
    }

    #[test]
    fn covariate_dimension_mismatch() {
        let mut a = rec("a", 4.0, Status::Censor, Arm::One);
        a.covariates = vec![1.0];
        let mut b = rec("b", 4.0, Status::Censor, Arm::One);
        b.covariates = vec![1.0, 2.0];
        assert!(matches!(
            group_records(&[a, b]),
            Err(Error::CovariateDimension { .. })
        ));
    }

    #[test]
    fn event_at_follow_up_is_kept() {
        let arms = group_records(&[
            rec("a", 4.0, Status::Event, Arm::One),
            rec("a", 4.0, Status::Death, Arm::One),
        ])
        .unwrap();
        assert_eq!(arms[&Arm::One].total_events(), 1);
    }

    fn study_with_max(max1: f64, max2: f64, tau: f64) -> StudyDataset {
        let a1 = ArmDataset::new(
            Arm::One,
            vec![SubjectHistory::simple("a", max1, false, &[]).unwrap()],
        )
        .unwrap();
        let a2 = ArmDataset::new(
            Arm::Two,
            vec![SubjectHistory::simple("b", max2, false, &[]).unwrap()],
        )
        .unwrap();
        StudyDataset::new(a1, a2, tau).unwrap()
    }

    #[test]
    fn truncation_rule() {
        assert!(validate_truncation(&study_with_max(12.0, 12.0, 12.0), true)
            .unwrap()
            .is_ok());
        let warn = validate_truncation(&study_with_max(10.0, 12.0, 12.0), false).unwrap();
        assert_eq!(warn, TruncationReport::Warn(vec![(Arm::One, 10.0)]));
        assert!(matches!(
            validate_truncation(&study_with_max(10.0, 12.0, 12.0), true),
            Err(Error::TruncationBeyondFollowUp { .. })
        ));
    }

    #[test]
    fn csv_parse_with_types_and_covariates() {
        let text = "id,time,status,arm,event_type,age\n\
                    s1,2,1,1,3,61.5\n\
                    s1,10,2,1,,61.5\n\
                    s2,8,0,2,,40\n";
        let (layout, records) = read_records_csv(text.as_bytes()).unwrap();
        assert!(layout.has_event_type);
        assert_eq!(layout.covariate_names, vec!["age"]);
        assert_eq!(records[0].event_type, Some(3));
        let study = ingest_records(&records, 10.0).unwrap();
        assert_eq!(study.arm1.subjects()[0].covariates, vec![61.5]);
        assert_eq!(study.arm2.subjects()[0].follow_up, 8.0);
    }

    #[test]
    fn csv_rejects_bad_status_and_missing_covariate() {
        let bad_status = "id,time,status,arm\ns1,2,5,1\n";
        assert!(matches!(
            read_records_csv(bad_status.as_bytes()),
            Err(Error::UnknownStatus(5))
        ));
        let missing = "id,time,status,arm,w\ns1,2,0,1,\n";
        assert!(matches!(
            read_records_csv(missing.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        let bad_header = "subject,time,status,arm\n";
        assert!(read_records_csv(bad_header.as_bytes()).is_err());
    }
}
