#pragma once

#include "disclab/certificate.hpp"
#include "disclab/core.hpp"
#include "disclab/komlos.hpp"
#include "disclab/recursion.hpp"
#include "disclab/solvers.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace disclab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kInstanceSchema = "disclab-instance-v1";
inline constexpr const char* kKomlosSchema = "disclab-komlos-v1";
inline constexpr const char* kColoringSchema = "disclab-coloring-v1";

// Instance, Komlos and coloring documents are written with every real as
// "%.17g", so read(write(x)) reproduces x bit for bit.
std::string instance_to_json(const Instance& instance);
std::string komlos_to_json(const KomlosInstance& kom);
std::string coloring_to_json(const Coloring& coloring);

Instance instance_from_json(const std::string& text);
KomlosInstance komlos_from_json(const std::string& text);
Coloring coloring_from_json(const std::string& text);

/// Parses either instance schema, dispatching on the "schema" field.
std::variant<Instance, KomlosInstance> any_instance_from_json(const std::string& text);

std::string read_file(const std::string& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& text);

Instance read_instance(const std::string& path);
KomlosInstance read_komlos(const std::string& path);
Coloring read_coloring(const std::string& path);
void write_instance(const std::string& path, const Instance& instance);
void write_komlos(const std::string& path, const KomlosInstance& kom);
void write_coloring(const std::string& path, const Coloring& coloring);

/// "fnv1a64:<16 hex digits>" over the canonical serialization.
std::string instance_hash(const Instance& instance);
std::string komlos_hash(const KomlosInstance& kom);

Json to_json(const DiscrepancyReport& report);
Json to_json(const SolveResult& result);
Json to_json(const Certificate& cert);
Json to_json(const VolumeEstimate& estimate);
Json to_json(const RecursionTrace& trace);
Json to_json(const KomlosResult& result);
Json values_json(const Coloring& coloring);

}  // namespace disclab
