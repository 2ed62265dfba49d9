use rcf_fields::{make_tower, TowerOptions};
use rcf_invariants::{InvariantSpec, Ladder, ReportRequest};

use crate::{CliError, ExampleId};

/// Every input of a worked example. Towers use tabulated `h3` and `Q`, and the
/// default ladder, so runs on different machines give identical JSON.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub d1: i64,
    pub d2: i64,
    pub level: u64,
    pub p: u64,
    pub mu: u32,
    pub field: u8,
    pub power: u64,
    pub request: ReportRequest,
}

const NORM: ReportRequest = ReportRequest { degrees: true, norm_generator: true, conjugates: false, minimal_polynomial: false, normal_basis: false };

pub fn preset(id: ExampleId) -> Preset {
    let base = |name, d1, d2, level, p, mu, field| Preset { name, d1, d2, level, p, mu, field, power: 1, request: NORM };
    match id {
        ExampleId::E614a => base("6-14a", 15, 26, 5, 37, 0, 1),
        ExampleId::E614b => base("6-14b", 7, 2, 1, 37, 0, 2),
        ExampleId::E79 => base("7-9", 15, 26, 5, 37, 1, 1),
        ExampleId::E88 => Preset {
            request: ReportRequest { minimal_polynomial: true, conjugates: true, ..NORM },
            ..base("8-8", 31, 2, 1, 5, 0, 2)
        },
        ExampleId::E96 => Preset {
            request: ReportRequest { degrees: false, norm_generator: false, normal_basis: true, ..Default::default() },
            ..base("9-6", 31, 2, 1, 5, 0, 2)
        },
    }
}

impl Preset {
    pub fn spec(&self) -> Result<InvariantSpec, CliError> {
        let tower = make_tower(self.d1, self.d2, TowerOptions::default())?;
        Ok(InvariantSpec::new(tower, self.level, self.p, self.mu, self.field, self.power)?.with_ladder(Ladder::default())?)
    }
}
