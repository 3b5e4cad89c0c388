//! Finite matrix groups, character tables and virtual characters.

pub mod character;
pub mod matrix_group;

pub use character::{
    char_table_cyclic, char_table_dihedral, char_table_product, decompose, det_factor, is_effective, reconstruct,
    CharacterTable, ClassFunction, VirtualCharacter,
};
pub use matrix_group::{group_closure, FiniteMatrixGroup, GroupSpec, Preset, PresetSpec, UserTable};
