//! Named Hamilton orders.
//!
//! `NR1_4` is the order of heights printed for it; `NR2_4` and `NR3_4` are the
//! members of their classes whose edges match the printed tables; the six
//! d=6 orders are the printed sequences (0-based labels). `R1_4`..`R4_4` are
//! the four realizable d=4 classes in canonical form, numbered in canonical
//! order.

use crate::orientation::{HamiltonOrder, OrientationError};

pub struct NamedClass {
    pub name: &'static str,
    pub d: usize,
    pub zero_based: bool,
    pub text: &'static str,
}

impl NamedClass {
    pub fn order(&self) -> Result<HamiltonOrder, OrientationError> {
        HamiltonOrder::parse(self.text, self.zero_based)
    }
}

pub const NAMED_CLASSES: &[NamedClass] = &[
    NamedClass {
        name: "R1_4",
        d: 4,
        zero_based: false,
        text: "123 < 125 < 145 < 345 < 234 < 347 < 147 < 127 < 167 < 367 < 567 < 456 < 256 < 236",
    },
    NamedClass {
        name: "R2_4",
        d: 4,
        zero_based: false,
        text: "123 < 125 < 256 < 567 < 456 < 145 < 345 < 234 < 347 < 147 < 127 < 167 < 367 < 236",
    },
    NamedClass {
        name: "R3_4",
        d: 4,
        zero_based: false,
        text: "123 < 127 < 125 < 256 < 567 < 456 < 145 < 345 < 234 < 347 < 147 < 167 < 367 < 236",
    },
    NamedClass {
        name: "R4_4",
        d: 4,
        zero_based: false,
        text: "125 < 123 < 234 < 236 < 256 < 456 < 567 < 367 < 167 < 127 < 147 < 347 < 345 < 145",
    },
    NamedClass {
        name: "NR1_4",
        d: 4,
        zero_based: false,
        text: "145 < 147 < 127 < 125 < 123 < 236 < 234 < 345 < 347 < 367 < 167 < 567 < 256 < 456",
    },
    NamedClass {
        name: "NR2_4",
        d: 4,
        zero_based: false,
        text: "145 < 456 < 256 < 567 < 367 < 167 < 147 < 127 < 125 < 123 < 236 < 234 < 347 < 345",
    },
    NamedClass {
        name: "NR3_4",
        d: 4,
        zero_based: false,
        text: "145 < 456 < 256 < 567 < 367 < 167 < 147 < 127 < 125 < 123 < 236 < 234 < 345 < 347",
    },
    NamedClass {
        name: "NR1_6",
        d: 6,
        zero_based: true,
        text: "458 < 258 < 238 < 278 < 478 < 078 < 058 < 038 < 018 < 014 < 012 < 016 < 036 < 034 < 345 \
               < 234 < 347 < 147 < 127 < 167 < 678 < 367 < 567 < 056 < 456 < 256 < 236 < 123 < 125 < 145",
    },
    NamedClass {
        name: "NR2_6",
        d: 6,
        zero_based: true,
        text: "038 < 238 < 123 < 236 < 234 < 034 < 345 < 347 < 478 < 147 < 014 < 018 < 012 < 016 < 036 \
               < 367 < 167 < 678 < 567 < 056 < 256 < 456 < 145 < 458 < 058 < 258 < 125 < 127 < 278 < 078",
    },
    NamedClass {
        name: "NR3_6",
        d: 6,
        zero_based: true,
        text: "038 < 238 < 236 < 036 < 016 < 056 < 256 < 567 < 367 < 167 < 678 < 078 < 278 < 478 < 147 \
               < 127 < 123 < 012 < 125 < 258 < 058 < 458 < 456 < 145 < 345 < 347 < 234 < 034 < 014 < 018",
    },
    NamedClass {
        name: "NR4_6",
        d: 6,
        zero_based: true,
        text: "038 < 238 < 236 < 036 < 016 < 056 < 256 < 567 < 367 < 167 < 678 < 278 < 078 < 478 < 147 \
               < 127 < 123 < 012 < 125 < 258 < 058 < 458 < 456 < 145 < 345 < 347 < 234 < 034 < 014 < 018",
    },
    NamedClass {
        name: "NR5_6",
        d: 6,
        zero_based: true,
        text: "038 < 058 < 258 < 125 < 256 < 056 < 456 < 458 < 145 < 345 < 034 < 234 < 347 < 147 < 014 \
               < 018 < 012 < 016 < 036 < 236 < 367 < 567 < 167 < 678 < 478 < 078 < 278 < 127 < 123 < 238",
    },
    NamedClass {
        name: "NR6_6",
        d: 6,
        zero_based: true,
        text: "018 < 058 < 458 < 258 < 125 < 012 < 127 < 278 < 078 < 038 < 238 < 123 < 234 < 034 < 345 \
               < 347 < 478 < 147 < 014 < 145 < 456 < 256 < 236 < 036 < 367 < 678 < 567 < 167 < 016 < 056",
    },
];

/// Looks a name up case-insensitively.
pub fn named_class(name: &str) -> Option<&'static NamedClass> {
    NAMED_CLASSES.iter().find(|c| c.name.eq_ignore_ascii_case(name))
}
