//! Scenario files: flat `key = value` text with `#` comments.
//!
//! ```text
//! label      = SKKVB maximal violation
//! system     = classical_correlated:2
//! ancilla    = bell:phi+
//! functional = chsh
//! mode       = so2
//! seed       = 7
//! settings.0 = so2:0; so2:pi/2
//! settings.1 = so2:pi/4; so2:-pi/4
//! ```
//!
//! `settings.<i>` lists party `i`'s settings separated by `;`. Settings are
//! optional for optimization and sweeps but required for plain runs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{OltError, Result};
use crate::functional::FunctionalSpec;
use crate::gates::{AngleSetting, RotationMode};
use crate::states::StateSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub system: StateSpec,
    pub ancilla: StateSpec,
    pub functional: FunctionalSpec,
    /// `settings[party][setting]`, when given explicitly.
    pub settings: Option<Vec<Vec<AngleSetting>>>,
    pub mode: RotationMode,
    pub seed: u64,
}

fn parse_err(line: usize, field: &str, message: impl Into<String>) -> OltError {
    OltError::Parse {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut label = None;
        let mut system = None;
        let mut ancilla = None;
        let mut functional = None;
        let mut mode = None;
        let mut seed = None;
        let mut settings: BTreeMap<usize, (usize, Vec<AngleSetting>)> = BTreeMap::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(line_no, line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());

            fn set<T>(slot: &mut Option<(usize, T)>, line: usize, key: &str, v: T) -> Result<()> {
                if let Some((first, _)) = slot {
                    return Err(parse_err(line, key, format!("duplicate key, first set on line {first}")));
                }
                *slot = Some((line, v));
                Ok(())
            }
            fn field<T>(r: std::result::Result<T, String>, line: usize, key: &str) -> Result<T> {
                r.map_err(|m| parse_err(line, key, m))
            }

            match key {
                "label" => set(&mut label, line_no, key, value.to_string())?,
                "system" => set(&mut system, line_no, key, field(value.parse::<StateSpec>(), line_no, key)?)?,
                "ancilla" => set(&mut ancilla, line_no, key, field(value.parse::<StateSpec>(), line_no, key)?)?,
                "functional" => set(&mut functional, line_no, key, field(value.parse::<FunctionalSpec>(), line_no, key)?)?,
                "mode" => set(&mut mode, line_no, key, field(value.parse::<RotationMode>(), line_no, key)?)?,
                "seed" => {
                    let s = field(value.parse::<u64>().map_err(|e| format!("bad seed: {e}")), line_no, key)?;
                    set(&mut seed, line_no, key, s)?
                }
                _ => {
                    let party = key
                        .strip_prefix("settings.")
                        .ok_or_else(|| parse_err(line_no, key, "unknown key"))?;
                    let party: usize = party
                        .parse()
                        .map_err(|_| parse_err(line_no, key, "party index must be a non-negative integer"))?;
                    let list = value
                        .split(';')
                        .map(|s| s.parse::<AngleSetting>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|m| parse_err(line_no, key, m))?;
                    if let Some((first, _)) = settings.insert(party, (line_no, list)) {
                        return Err(parse_err(line_no, key, format!("duplicate key, first set on line {first}")));
                    }
                }
            }
        }

        let required = |slot: Option<(usize, StateSpec)>, name: &str| {
            slot.map(|(_, v)| v)
                .ok_or_else(|| parse_err(0, name, "missing required key"))
        };
        let settings = if settings.is_empty() {
            None
        } else {
            let n = settings.len();
            for (expected, (&party, &(line, _))) in settings.iter().enumerate() {
                if party != expected {
                    return Err(parse_err(
                        line,
                        &format!("settings.{party}"),
                        format!("settings parties must be numbered 0..{n} without gaps"),
                    ));
                }
            }
            Some(settings.into_values().map(|(_, v)| v).collect())
        };
        let scenario = Scenario {
            label: label.map(|(_, v)| v).unwrap_or_default(),
            system: required(system, "system")?,
            ancilla: required(ancilla, "ancilla")?,
            functional: functional
                .map(|(_, v)| v)
                .ok_or_else(|| parse_err(0, "functional", "missing required key"))?,
            settings,
            mode: mode.map(|(_, v)| v).unwrap_or(RotationMode::So2),
            seed: seed.map(|(_, v)| v).unwrap_or(0),
        };
        scenario.check()?;
        Ok(scenario)
    }

    /// Party counts of system, ancilla, functional and settings agree.
    pub fn check(&self) -> Result<()> {
        let n = self.functional.n_parties();
        for (what, got) in [("system", self.system.n_qubits()), ("ancilla", self.ancilla.n_qubits())] {
            if got != n {
                return Err(OltError::PartyMismatch { what, expected: n, got });
            }
        }
        if let Some(settings) = &self.settings {
            if settings.len() != n {
                return Err(OltError::PartyMismatch {
                    what: "settings",
                    expected: n,
                    got: settings.len(),
                });
            }
            let shape: Vec<usize> = settings.iter().map(Vec::len).collect();
            let expected = self.functional.build()?.shape().to_vec();
            if shape != expected {
                return Err(OltError::ShapeMismatch { expected, got: shape });
            }
        }
        Ok(())
    }

    pub fn n_parties(&self) -> usize {
        self.functional.n_parties()
    }
}

impl FromStr for Scenario {
    type Err = OltError;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::parse(s)
    }
}

impl fmt::Display for Scenario {
    /// Canonical form; parses back to an equal scenario.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.label.is_empty() {
            writeln!(f, "label = {}", self.label)?;
        }
        writeln!(f, "system = {}", self.system)?;
        writeln!(f, "ancilla = {}", self.ancilla)?;
        writeln!(f, "functional = {}", self.functional)?;
        writeln!(f, "mode = {}", self.mode)?;
        writeln!(f, "seed = {}", self.seed)?;
        if let Some(settings) = &self.settings {
            for (party, list) in settings.iter().enumerate() {
                let items: Vec<String> = list.iter().map(AngleSetting::to_string).collect();
                writeln!(f, "settings.{party} = {}", items.join("; "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    const SKKVB: &str = "\
# maximal violation
label = SKKVB
system = classical_correlated:2
ancilla = bell:phi+   # shared pair
functional = chsh
settings.0 = so2:0; so2:pi/2
settings.1 = so2:pi/4; so2:-pi/4
";

    #[test]
    fn parses_example() {
        let s = Scenario::parse(SKKVB).unwrap();
        assert_eq!(s.label, "SKKVB");
        assert_eq!(s.mode, RotationMode::So2);
        assert_eq!(s.seed, 0);
        let settings = s.settings.as_ref().unwrap();
        assert_eq!(settings[0][1], AngleSetting::so2(FRAC_PI_2));
        assert_eq!(settings[1][1], AngleSetting::so2(-FRAC_PI_4));
    }

    #[test]
    fn display_round_trips() {
        let s = Scenario::parse(SKKVB).unwrap();
        assert_eq!(Scenario::parse(&s.to_string()).unwrap(), s);
        let mermin = "system = basis:000\nancilla = ghz:3,i\nfunctional = mermin3\nmode = su2\nseed = 4\n\
            settings.0 = su2:0,pi/2,0; su2:0,pi/2,-pi/2\n\
            settings.1 = su2:0,pi/2,0; su2:0,pi/2,-pi/2\n\
            settings.2 = su2:0,pi/2,0; su2:0,pi/2,-pi/2\n";
        let m = Scenario::parse(mermin).unwrap();
        assert_eq!(Scenario::parse(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn settings_optional() {
        let s = Scenario::parse("system=basis:00\nancilla=werner:0.5\nfunctional=chsh\n").unwrap();
        assert!(s.settings.is_none());
    }

    fn parse_error(text: &str) -> (usize, String) {
        match Scenario::parse(text) {
            Err(OltError::Parse { line, field, .. }) => (line, field),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        assert_eq!(parse_error("system = basis:00\nancilla = bell:xx\n"), (2, "ancilla".into()));
        assert_eq!(parse_error("system = basis:00\nbogus = 1\n"), (2, "bogus".into()));
        assert_eq!(parse_error("no equals sign\n").0, 1);
        assert_eq!(parse_error("system = basis:00\nsystem = basis:11\n"), (2, "system".into()));
        assert_eq!(parse_error("ancilla = bell:phi+\nfunctional = chsh\n"), (0, "system".into()));
        assert_eq!(
            parse_error("system=basis:00\nancilla=bell:phi+\nfunctional=chsh\nsettings.0 = so2:0; so2:pie\n"),
            (4, "settings.0".into())
        );
        assert_eq!(
            parse_error("system=basis:00\nancilla=bell:phi+\nfunctional=chsh\nsettings.1 = so2:0; so2:1\n"),
            (4, "settings.1".into())
        );
    }

    #[test]
    fn invariant_violations() {
        let bad_parties = "system = basis:000\nancilla = bell:phi+\nfunctional = chsh\n";
        assert!(matches!(Scenario::parse(bad_parties), Err(OltError::PartyMismatch { what: "system", .. })));
        let bad_shape = "system = basis:00\nancilla = bell:phi+\nfunctional = chsh\n\
            settings.0 = so2:0\nsettings.1 = so2:0; so2:1\n";
        assert!(matches!(Scenario::parse(bad_shape), Err(OltError::ShapeMismatch { .. })));
    }
}
