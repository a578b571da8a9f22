//! Small groups shipped as Cayley and permutation files under `data/groups`.

use super::Group;
use crate::grigorchuk::GrigorchukGroup;

pub const Z2: &str = include_str!("../../data/groups/z2.cayley");
pub const Z3: &str = include_str!("../../data/groups/z3.cayley");
pub const Z4: &str = include_str!("../../data/groups/z4.cayley");
pub const KLEIN: &str = include_str!("../../data/groups/klein.cayley");
pub const S3: &str = include_str!("../../data/groups/s3.cayley");
pub const D4: &str = include_str!("../../data/groups/d4.cayley");
pub const Q8: &str = include_str!("../../data/groups/q8.cayley");
pub const S3_PERM: &str = include_str!("../../data/groups/s3.perm");

/// Name and file text of every built-in finite Cayley group.
pub const CAYLEY_GROUPS: [(&str, &str); 7] = [
    ("z2", Z2),
    ("z3", Z3),
    ("z4", Z4),
    ("klein", KLEIN),
    ("s3", S3),
    ("d4", D4),
    ("q8", Q8),
];

pub fn by_name(name: &str) -> Option<Group> {
    match name {
        "s3-perm" => Some(s3_perm()),
        "grigorchuk" => Some(Group::Grigorchuk(GrigorchukGroup::new())),
        _ => CAYLEY_GROUPS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| Group::parse(text).expect("built-in group file is valid")),
    }
}

pub fn z2() -> Group {
    Group::parse(Z2).unwrap()
}

pub fn z3() -> Group {
    Group::parse(Z3).unwrap()
}

pub fn z4() -> Group {
    Group::parse(Z4).unwrap()
}

pub fn klein() -> Group {
    Group::parse(KLEIN).unwrap()
}

pub fn s3() -> Group {
    Group::parse(S3).unwrap()
}

pub fn d4() -> Group {
    Group::parse(D4).unwrap()
}

pub fn q8() -> Group {
    Group::parse(Q8).unwrap()
}

pub fn s3_perm() -> Group {
    Group::parse(S3_PERM).unwrap()
}
