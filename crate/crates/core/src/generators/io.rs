//! Plain-text profile format.
//!
//! ```text
//! # comment
//! m=3 n=5
//! 2: 0>1>2
//! 3: 2>0>1
//! ```
//!
//! Veto profiles use `<weight>: veto <c>` entry lines. `n` must equal the
//! total weight. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::profile::{
    validate_ballot, Ballot, BallotError, Candidate, Profile, VetoBallot, VetoProfile,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Validation { line: usize, source: BallotError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyProfile {
    Ranked(Profile),
    Veto(VetoProfile),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line: usize, text: &str) -> Result<(usize, u64), FormatError> {
    let mut m = None;
    let mut n = None;
    for token in text.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected key=value, got `{token}`")))?;
        match key {
            "m" => {
                m = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| parse_err(line, "bad m"))?,
                )
            }
            "n" => n = Some(value.parse::<u64>().map_err(|_| parse_err(line, "bad n"))?),
            other => return Err(parse_err(line, format!("unknown header key `{other}`"))),
        }
    }
    match (m, n) {
        (Some(m), Some(n)) => Ok((m, n)),
        _ => Err(parse_err(line, "header must be `m=<int> n=<int>`")),
    }
}

fn parse_candidate(line: usize, token: &str) -> Result<Candidate, FormatError> {
    token
        .trim()
        .parse::<Candidate>()
        .map_err(|_| parse_err(line, format!("bad candidate `{}`", token.trim())))
}

/// Reads either kind of profile, deciding by the first entry line.
pub fn read_any_profile(text: &str) -> Result<AnyProfile, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (m, n) = parse_header(hline, header)?;

    let mut ranked = Profile::new(m);
    let mut vetoes = VetoProfile::new(m);
    let mut is_veto: Option<bool> = None;
    let mut total: u64 = 0;
    for (line, entry) in lines {
        let (weight, body) = entry
            .split_once(':')
            .ok_or_else(|| parse_err(line, "expected `<weight>: <ballot>`"))?;
        let weight: u64 = weight
            .trim()
            .parse()
            .map_err(|_| parse_err(line, format!("bad weight `{}`", weight.trim())))?;
        if weight == 0 {
            return Err(parse_err(line, "weight must be positive"));
        }
        total = total
            .checked_add(weight)
            .ok_or_else(|| parse_err(line, "total weight overflows"))?;
        let body = body.trim();
        let this_veto = body.starts_with("veto");
        if *is_veto.get_or_insert(this_veto) != this_veto {
            return Err(parse_err(line, "cannot mix ranked and veto ballots"));
        }
        if let Some(rest) = body.strip_prefix("veto") {
            let c = parse_candidate(line, rest)?;
            let ballot =
                VetoBallot::new(c, m).map_err(|source| FormatError::Validation { line, source })?;
            vetoes.push(ballot, weight).expect("validated veto");
        } else {
            let ranking = body
                .split('>')
                .map(|t| parse_candidate(line, t))
                .collect::<Result<Vec<_>, _>>()?;
            validate_ballot(&ranking, m)
                .map_err(|source| FormatError::Validation { line, source })?;
            ranked
                .push(Ballot::new(ranking, m).expect("validated ballot"), weight)
                .expect("validated entry");
        }
    }
    if total != n {
        return Err(parse_err(
            hline,
            format!("header says n={n} but entries sum to {total}"),
        ));
    }
    Ok(match is_veto {
        Some(true) => AnyProfile::Veto(vetoes),
        _ => AnyProfile::Ranked(ranked),
    })
}

pub fn read_profile(text: &str) -> Result<Profile, FormatError> {
    match read_any_profile(text)? {
        AnyProfile::Ranked(p) => Ok(p),
        AnyProfile::Veto(_) => Err(parse_err(1, "expected ranked ballots, found vetoes")),
    }
}

/// Reads a veto profile. Ranked input is accepted and converted to sincere
/// vetoes of each ballot's last place.
pub fn read_veto_profile(text: &str) -> Result<VetoProfile, FormatError> {
    match read_any_profile(text)? {
        AnyProfile::Veto(p) => Ok(p),
        AnyProfile::Ranked(p) => Ok(p.sincere_vetoes()),
    }
}

pub fn write_profile(profile: &Profile) -> String {
    let mut out = format!("m={} n={}\n", profile.m(), profile.total_weight());
    for (ballot, weight) in profile.entries() {
        writeln!(out, "{weight}: {ballot}").expect("write to String");
    }
    out
}

pub fn write_veto_profile(profile: &VetoProfile) -> String {
    let mut out = format!("m={} n={}\n", profile.m(), profile.total_weight());
    for (ballot, weight) in profile.entries() {
        writeln!(out, "{weight}: veto {}", ballot.vetoed).expect("write to String");
    }
    out
}
