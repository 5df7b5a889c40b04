//! Family JSON shared with the command line.
//!
//! `{"version": 1, "ground": 6, "n": 4, "groups": [{"name": "F1", "sets": [[0, 1]]}]}`.
//! `n` is present when the elements are edges of `K_n`.

use serde::{Deserialize, Serialize};

use crate::board::{complete_graph_board, Board, Family, Group, Objective};
use crate::error::{Error, Result};

pub const FAMILY_FILE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub version: u32,
    pub ground: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub groups: Vec<Group>,
}

impl FamilyFile {
    pub fn new(board: &Board, family: &Family) -> FamilyFile {
        FamilyFile {
            version: FAMILY_FILE_VERSION,
            ground: board.ground(),
            n: board.is_labeled().then(|| board.n()),
            groups: family.groups().to_vec(),
        }
    }

    /// Validated board and explicit objective.
    pub fn into_game(self) -> Result<(Board, Objective)> {
        if self.version != FAMILY_FILE_VERSION {
            return Err(Error::InvalidArgument(format!(
                "version: unsupported family file version {}",
                self.version
            )));
        }
        let board = match self.n {
            Some(n) => {
                let b = complete_graph_board(n)?;
                if b.ground() != self.ground {
                    return Err(Error::InvalidArgument(format!(
                        "ground: K_{n} has {} edges, file says {}",
                        b.ground(),
                        self.ground
                    )));
                }
                b
            }
            None => Board::abstract_board(self.ground),
        };
        let family = Family::new(self.groups)?;
        family.check_ground(board.ground())?;
        Ok((board, Objective::explicit(family)))
    }
}

pub fn family_to_json(board: &Board, family: &Family) -> Result<String> {
    serde_json::to_string_pretty(&FamilyFile::new(board, family))
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn family_from_json(text: &str) -> Result<(Board, Objective)> {
    let file: FamilyFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidArgument(format!("family file: {e}")))?;
    file.into_game()
}
