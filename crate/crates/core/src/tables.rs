//! Static reference tables shipped with the crate. Nothing here is computed.

use std::fmt;
use std::str::FromStr;

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    UnimodularSigns,
    C1SpaceForms,
    C1Ekt,
    C2Symmetric,
}

impl TableId {
    pub const ALL: [TableId; 4] = [
        TableId::UnimodularSigns,
        TableId::C1SpaceForms,
        TableId::C1Ekt,
        TableId::C2Symmetric,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TableId::UnimodularSigns => "unimodular-signs",
            TableId::C1SpaceForms => "c1-space-forms",
            TableId::C1Ekt => "c1-ekt",
            TableId::C2Symmetric => "c2-symmetric",
        }
    }

    fn raw(&self) -> &'static str {
        match self {
            TableId::UnimodularSigns => include_str!("../data/tables/unimodular-signs.json"),
            TableId::C1SpaceForms => include_str!("../data/tables/c1-space-forms.json"),
            TableId::C1Ekt => include_str!("../data/tables/c1-ekt.json"),
            TableId::C2Symmetric => include_str!("../data/tables/c2-symmetric.json"),
        }
    }

    pub fn load(&self) -> Value {
        serde_json::from_str(self.raw()).expect("embedded tables are valid JSON")
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = TableId::ALL.iter().map(|t| t.name()).collect();
                format!("unknown table `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_parse_and_are_flagged_static() {
        for id in TableId::ALL {
            let t = id.load();
            assert_eq!(t["name"], id.name());
            assert_eq!(t["computed"], false);
            assert!(t["rows"].as_array().is_some_and(|r| !r.is_empty()));
        }
    }

    #[test]
    fn sign_table_order() {
        let rows = TableId::UnimodularSigns.load()["rows"]
            .as_array()
            .unwrap()
            .clone();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0]["group"], "SU2");
        assert_eq!(rows[5]["group"], "R3");
        assert_eq!(rows[5]["signs"], serde_json::json!(["0", "0", "0"]));
    }
}
