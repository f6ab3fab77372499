//! JSON profile documents and CSV embedding tables.
//!
//! Profile documents look like
//! `{"n": 3, "r0": 2.0, "pieces": [{"kind": "constant", "m": 1.0, "r_lo": 2.0, "r_hi": null}]}`
//! where `"r_hi": null` stands for `+∞`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::EmbeddingRow;
use crate::profiles::{AdmissibleProfile, PieceKind, ProfilePiece};
use crate::scalar::{lit, to_f64, Real};

/// One piece of a profile document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PieceDocument {
    Constant {
        m: f64,
        r_lo: f64,
        r_hi: Option<f64>,
    },
    FractionOfMax {
        epsilon: f64,
        r_lo: f64,
        r_hi: Option<f64>,
    },
    MollifiedJoin {
        width: f64,
        r_lo: f64,
        r_hi: Option<f64>,
    },
}

/// Serialized form of an [`AdmissibleProfile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub n: usize,
    pub r0: f64,
    pub pieces: Vec<PieceDocument>,
}

impl ProfileDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile documents always serialize")
    }

    pub fn from_profile<T: Real>(profile: &AdmissibleProfile<T>) -> Self {
        let upper = |r: T| if r.is_finite() { Some(to_f64(r)) } else { None };
        let pieces = profile
            .pieces()
            .iter()
            .map(|p| {
                let (r_lo, r_hi) = (to_f64(p.r_lo), upper(p.r_hi));
                match p.kind {
                    PieceKind::Constant { mass } => PieceDocument::Constant {
                        m: to_f64(mass),
                        r_lo,
                        r_hi,
                    },
                    PieceKind::FractionOfMax { epsilon } => PieceDocument::FractionOfMax {
                        epsilon: to_f64(epsilon),
                        r_lo,
                        r_hi,
                    },
                    PieceKind::MollifiedJoin { width } => PieceDocument::MollifiedJoin {
                        width: to_f64(width),
                        r_lo,
                        r_hi,
                    },
                }
            })
            .collect();
        Self {
            n: profile.n(),
            r0: to_f64(profile.r0()),
            pieces,
        }
    }

    /// Builds the profile; structural problems surface as [`Error::MalformedPieces`].
    pub fn to_profile<T: Real>(&self) -> Result<AdmissibleProfile<T>> {
        let convert = |x: f64| -> Result<T> {
            T::from_f64(x)
                .filter(|v| v.is_finite() || x.is_infinite())
                .ok_or_else(|| Error::MalformedPieces(format!("{x} is not representable")))
        };
        let upper = |r: Option<f64>| -> Result<T> { r.map_or(Ok(T::infinity()), convert) };
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(match *p {
                    PieceDocument::Constant { m, r_lo, r_hi } => {
                        ProfilePiece::constant(convert(m)?, convert(r_lo)?, upper(r_hi)?)
                    }
                    PieceDocument::FractionOfMax {
                        epsilon,
                        r_lo,
                        r_hi,
                    } => ProfilePiece::fraction_of_max(
                        convert(epsilon)?,
                        convert(r_lo)?,
                        upper(r_hi)?,
                    ),
                    PieceDocument::MollifiedJoin { width, r_lo, r_hi } => ProfilePiece {
                        kind: PieceKind::MollifiedJoin {
                            width: convert(width)?,
                        },
                        r_lo: convert(r_lo)?,
                        r_hi: upper(r_hi)?,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        AdmissibleProfile::new(self.n, lit::<T>(self.r0), pieces)
    }
}

/// Writes `r, s, z, drds, m_hawking, scalar_curvature` rows with a header.
pub fn write_embedding_csv<T: Real, W: Write>(out: W, rows: &[EmbeddingRow<T>]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    writer
        .write_record(["r", "s", "z", "drds", "m_hawking", "scalar_curvature"])
        .map_err(io)?;
    for row in rows {
        let fields = [
            row.r,
            row.s,
            row.z,
            row.drds,
            row.m_hawking,
            row.scalar_curvature,
        ];
        writer
            .write_record(fields.iter().map(|&v| format!("{:e}", to_f64(v))))
            .map_err(io)?;
    }
    writer.flush().map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{GeometryOptions, RotSymManifold};
    use crate::profiles::{schwarzschild_profile, sharp_turn_profile};

    #[test]
    fn document_round_trip() {
        let p = sharp_turn_profile(3, 1.0_f64, 1.2, 5.0).unwrap();
        let doc = ProfileDocument::from_profile(&p);
        let text = doc.to_json_pretty();
        assert!(text.contains("\"kind\": \"mollified_join\""));
        assert!(text.contains("\"r_hi\": null"));
        let back: AdmissibleProfile<f64> = ProfileDocument::from_json(&text)
            .unwrap()
            .to_profile()
            .unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn parses_the_documented_format() {
        let text = r#"{"n": 3, "r0": 2.0, "pieces": [
            {"kind": "constant", "m": 1.0, "r_lo": 2.0, "r_hi": 3.0},
            {"kind": "fraction_of_max", "epsilon": 0.5, "r_lo": 3.0, "r_hi": 4.0},
            {"kind": "constant", "m": 1.0, "r_lo": 4.0, "r_hi": null}]}"#;
        let p: AdmissibleProfile<f64> = ProfileDocument::from_json(text)
            .unwrap()
            .to_profile()
            .unwrap();
        assert_eq!(p.pieces().len(), 3);
        assert!(matches!(
            ProfileDocument::from_json("{\"n\": 3"),
            Err(Error::Parse(_))
        ));
        let gap = text.replace("\"r_lo\": 3.0", "\"r_lo\": 3.5");
        let doc = ProfileDocument::from_json(&gap).unwrap();
        assert!(matches!(
            doc.to_profile::<f64>(),
            Err(Error::MalformedPieces(_))
        ));
    }

    #[test]
    fn embedding_csv_has_header_and_rows() {
        let m = RotSymManifold::new(
            schwarzschild_profile(3, 1.0).unwrap(),
            GeometryOptions {
                grid_points: 16,
                ..GeometryOptions::default()
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_embedding_csv(&mut buf, &m.embedding_rows().unwrap()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "r,s,z,drds,m_hawking,scalar_curvature"
        );
        assert_eq!(lines.count(), 16);
    }
}
