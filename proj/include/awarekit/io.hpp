#pragma once

// JSON model files. One format per model class; "kind" is optional and
// inferred from the keys when absent. Writers emit keys in a fixed order
// so output is byte-stable.

#include <optional>
#include <string>
#include <string_view>

#include "awarekit/fh.hpp"
#include "awarekit/hms.hpp"
#include "awarekit/klm.hpp"
#include "awarekit/kripke.hpp"

namespace awarekit {

enum class ModelKind { Kripke, KLM, HMS, FH };

std::string_view to_string(ModelKind k);

/// A model file as read, before any class validation, so that checkers can
/// report on inputs the constructors would refuse.
struct ModelFile {
  ModelKind kind = ModelKind::Kripke;
  std::string comment;
  std::optional<KripkeModel> kripke;  // Kripke, KLM and FH files
  std::optional<AwarenessAssignment> awareness;
  std::optional<PointwiseAwarenessMap> pointwise;
  std::optional<FHAwareness> fh_awareness;
  std::optional<FrameSpec> frame;
  std::map<Atom, EventSpec> events;
};

/// Throws ParseError on malformed JSON or formulas, ModelError on missing or
/// mistyped fields.
ModelFile parse_model_file(std::string_view text);
ModelFile read_model_file(const std::string& path);

/// Pointwise maps go through canonicalize() first. Throw ModelError if the
/// file is of another kind or the class constructor refuses it.
KripkeLatticeModel build_klm(const ModelFile& file);
HMSModel build_hms(const ModelFile& file);
FHModel build_fh(const ModelFile& file);

std::string write_model(const KripkeModel& m, const std::string& comment = "");
std::string write_model(const KripkeLatticeModel& k, const std::string& comment = "");
std::string write_model(const HMSModel& m, const std::string& comment = "");
std::string write_model(const FHModel& s, const std::string& comment = "");

}  // namespace awarekit
