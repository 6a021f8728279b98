#pragma once

#include <string>

#include "awarekit/io.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(AWAREKIT_FIXTURE_DIR) + "/" + name; }

inline awarekit::KripkeLatticeModel trade() { return awarekit::build_klm(awarekit::read_model_file(path("trade.klm.json"))); }
inline awarekit::FHModel trade_fh() { return awarekit::build_fh(awarekit::read_model_file(path("trade.fh.json"))); }
inline awarekit::KripkeLatticeModel triv1() { return awarekit::build_klm(awarekit::read_model_file(path("triv1.klm.json"))); }

inline awarekit::WorldId at(const std::string& w, awarekit::AtomSet x) { return {w, std::move(x)}; }

}  // namespace fixtures
