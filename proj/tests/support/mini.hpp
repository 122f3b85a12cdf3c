#pragma once

#include "laip/analysis.hpp"
#include "laip/corpus.hpp"
#include "laip/lexicon.hpp"
#include "paths.hpp"

#include "json.hpp"
#include "synthetic.hpp"

namespace mini {

inline laip::Corpus corpus() { return laip::load_corpus(paths::fixture("mini_corpus.json")); }
inline laip::Lexicon base_lexicon() { return laip::load_lexicon(paths::data("lexicon_base.json")); }
inline nlohmann::json expected() { return nlohmann::json::parse(synth::read_file(paths::fixture("mini_expected.json"))); }

}  // namespace mini
