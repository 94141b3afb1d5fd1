//! TOML import and export of catalog entries.

use noetherlab_core::atom::Frame;
use noetherlab_core::catalog::{Alternate, Catalog, CatalogError, EntryData, EntryKind, Scope};
use noetherlab_core::jet::Entropy;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CatalogIoError {
    #[error("catalog TOML: {0}")]
    De(#[from] toml::de::Error),
    #[error("catalog TOML: {0}")]
    Ser(#[from] toml::ser::Error),
    #[error("entry {id}: unknown {field} '{value}'")]
    Field { id: String, field: &'static str, value: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Serialize, Deserialize)]
struct File {
    entry: Vec<Entry>,
}

/// Serialized form of one entry.
#[derive(Debug, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub kind: String,
    pub frame: String,
    /// `isentropic`, `general` or absent for both.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub gamma_two: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub basis_only: bool,
    pub reference: String,
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternates: Vec<Alt>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Alt {
    pub label: String,
    pub components: Vec<String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn frame_name(f: Frame) -> &'static str {
    match f {
        Frame::Lagrangian => "lagrangian",
        Frame::Eulerian => "eulerian",
    }
}

fn entropy_name(e: Entropy) -> &'static str {
    match e {
        Entropy::Isentropic => "isentropic",
        Entropy::General => "general",
    }
}

impl From<&EntryData> for Entry {
    fn from(e: &EntryData) -> Self {
        Entry {
            id: e.id.clone(),
            kind: e.kind.name().into(),
            frame: frame_name(e.frame).into(),
            entropy: e.scope.entropy.map(|x| entropy_name(x).into()),
            gamma_two: e.scope.gamma_two,
            basis_only: e.scope.basis_only,
            reference: e.reference.clone(),
            components: e.components.clone(),
            source: e.source.clone(),
            scale: e.scale.clone(),
            certificate: e.certificate.clone(),
            note: e.note.clone(),
            alternates: e.alternates.iter().map(|a| Alt { label: a.label.clone(), components: a.components.clone() }).collect(),
        }
    }
}

impl TryFrom<Entry> for EntryData {
    type Error = CatalogIoError;

    fn try_from(e: Entry) -> Result<Self, CatalogIoError> {
        let bad = |field, value: &str| CatalogIoError::Field { id: e.id.clone(), field, value: value.into() };
        let kind = EntryKind::from_name(&e.kind).ok_or_else(|| bad("kind", &e.kind))?;
        let frame = match e.frame.as_str() {
            "lagrangian" => Frame::Lagrangian,
            "eulerian" => Frame::Eulerian,
            other => return Err(bad("frame", other)),
        };
        let entropy = match e.entropy.as_deref() {
            None => None,
            Some("isentropic") => Some(Entropy::Isentropic),
            Some("general") => Some(Entropy::General),
            Some(other) => return Err(bad("entropy", other)),
        };
        Ok(EntryData {
            id: e.id,
            kind,
            frame,
            scope: Scope { entropy, gamma_two: e.gamma_two, basis_only: e.basis_only },
            reference: e.reference,
            components: e.components,
            source: e.source,
            scale: e.scale,
            certificate: e.certificate,
            alternates: e.alternates.into_iter().map(|a| Alternate { label: a.label, components: a.components }).collect(),
            note: e.note,
        })
    }
}

/// Serializes entries as an array of `[[entry]]` tables.
pub fn to_toml<'a>(entries: impl IntoIterator<Item = &'a EntryData>) -> Result<String, CatalogIoError> {
    let file = File { entry: entries.into_iter().map(Entry::from).collect() };
    Ok(toml::to_string_pretty(&file)?)
}

/// Parses and validates a catalog.
pub fn from_toml(text: &str) -> Result<Catalog, CatalogIoError> {
    let file: File = toml::from_str(text)?;
    let entries = file.entry.into_iter().map(EntryData::try_from).collect::<Result<Vec<_>, _>>()?;
    let cat = Catalog::from_entries(entries);
    cat.validate()?;
    Ok(cat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_round_trips() {
        let cat = Catalog::builtin();
        let text = to_toml(cat.entries()).unwrap();
        assert_eq!(from_toml(&text).unwrap(), cat);
    }

    #[test]
    fn bad_fields_are_reported() {
        let text = "[[entry]]\nid = \"Z\"\nkind = \"widget\"\nframe = \"lagrangian\"\nreference = \"\"\ncomponents = []\n";
        let e = from_toml(text).unwrap_err();
        assert!(e.to_string().contains("unknown kind 'widget'"), "{e}");
    }

    #[test]
    fn unparsable_components_fail_validation() {
        let text = "[[entry]]\nid = \"Z\"\nkind = \"conserved-vector\"\nframe = \"lagrangian\"\nreference = \"\"\ncomponents = [\"phi1 +\", \"0\", \"0\"]\n";
        assert!(matches!(from_toml(text), Err(CatalogIoError::Catalog(_))));
    }
}
