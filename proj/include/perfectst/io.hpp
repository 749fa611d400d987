#pragma once

// JSON, CSV and text serialization. Spec files carry exact integers for the
// certificate and round-trip doubles for G, so loading never re-runs a search.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "perfectst/algint.hpp"
#include "perfectst/analysis.hpp"
#include "perfectst/codebook.hpp"
#include "perfectst/lattices.hpp"
#include "perfectst/sim.hpp"

namespace perfectst {

using json = nlohmann::ordered_json;

/// Unreadable, malformed or inconsistent input.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const GaussLikeInt& x);
GaussLikeInt gauss_int_from_json(const json& j, Ring ring);

json to_json(const NonNormCertificate& cert);
NonNormCertificate certificate_from_json(const json& j);

json to_json(const GeneratorOrigin& origin);
GeneratorOrigin origin_from_json(const json& j);

/// Entries as rows of [re, im] pairs.
json to_json(const UnitaryGenerator& g);
UnitaryGenerator generator_from_json(const json& j);

json to_json(const CodeSpec& spec);
CodeSpec spec_from_json(const json& j);

/// 64-bit FNV-1a of the canonical spec JSON, as 16 hex digits.
std::string spec_digest(const CodeSpec& spec);

json to_json(const GammaReport& report);
json to_json(const MinDetReport& report);
json to_json(const PowerReport& report);
json to_json(const SimResult& result);

/// One row per line, entries to `decimals` places; imaginary parts are
/// omitted when the whole matrix is real at that precision.
std::string matrix_text(const CMatrix& m, int decimals = 4);

/// Columns: codeword, row, col, re, im.
std::string codewords_csv(const std::vector<CodeMatrix>& codewords);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

CodeSpec load_spec(const std::string& path);
void save_spec(const std::string& path, const CodeSpec& spec);

}  // namespace perfectst
