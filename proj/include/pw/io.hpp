#pragma once

#include <map>
#include <string>

#include "pw/affine.hpp"
#include "pw/signal.hpp"
#include "pw/spectra.hpp"

namespace pw::io {

// Signal files are a JSON header plus a companion array of complex values
// (little-endian float64 pairs or CSV). Layout is documented byte-exactly
// in docs/FORMATS.md.
enum class ValueEncoding { BinaryLE, Csv };

// Writes `json_path` and a sibling values file. Extra header fields can be
// attached under "meta" (e.g. tool version / config hash for artifacts).
void save_signal(const PWSignal& sig, const std::string& json_path,
                 ValueEncoding encoding = ValueEncoding::BinaryLE,
                 const std::map<std::string, std::string>& meta = {});

PWSignal load_signal(const std::string& json_path);

// Row-major matrix plus offset.
std::string affine_to_json(const affine::AffineMap& phi);
affine::AffineMap affine_from_json(const std::string& text);
std::string decomposition_to_json(const affine::InjectiveDecomposition& dec);

// Columns u_1..u_n,power; an optional "# key: value" comment header.
void write_spectrum_csv(const spectra::DiscreteSpectrum& spec,
                        const std::string& path,
                        const std::map<std::string, std::string>& meta = {});

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace pw::io
