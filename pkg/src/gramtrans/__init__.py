"""Multilingual data-to-text with transferable grammar units."""

from .grammar import (
    Case,
    DeterminerKind,
    FeatureSet,
    Gender,
    GrammarUnit,
    LOCALES,
    Locale,
    Number,
    Numeral,
    NumeralType,
    PartOfSpeech,
    Person,
    PronounType,
    Tense,
    apply_overrides,
    resolve_agreement,
    unit_from_dict,
    unit_to_dict,
    validate_unit,
)
from .lexicon import Lexicon, LexiconEntry, load_lexicon
from .realize import (
    RealizationContext,
    default_context,
    inflect_noun,
    realize_np,
    realize_verb,
)
from .templates import (
    DataRecord,
    Project,
    StatementTemplate,
    load_project,
    load_records,
    parse_template,
    serialize_segments,
)
from .planner import render_statement, select_statements
from .markers import align_translation, mark_units, strip_markers
from .transfer import aggregate_fragment, transfer_statement, transfer_unit
from .postedit import (
    ChangeCategory,
    ChangeRecord,
    aggregate_changes,
    classify_change,
    match_units,
    per_participant_counts,
)

__version__ = "0.1.0"
