#pragma once

#include <string>
#include <vector>

#include "liftdp/dp.hpp"
#include "liftdp/experiments.hpp"

namespace liftdp {

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

/// Datasets round-trip through JSON with full float precision; a manifest
/// next to the file records the seed and the file hash.
std::string dataset_to_json(const Dataset& data, const RunConfig& cfg);
Dataset dataset_from_json(const std::string& bytes, const SystemConfig& cfg);
void save_dataset(const std::string& path, const Dataset& data, const RunConfig& cfg);
Dataset load_dataset(const std::string& path, const SystemConfig& cfg);
void write_dataset_manifest(const std::string& dataset_path, const RunConfig& cfg);

/// Versioned policy document: resolved config, net description, per-stage
/// weight arrays (row-major, full precision), the initial ensemble counts
/// and the achieved value with per-stage state counts. Serialization is
/// canonical, so saving a loaded document reproduces it byte for byte.
struct PolicyDocument {
    RunConfig config;
    std::string net_mode;
    std::uint64_t net_seed = 0;
    int net_resolution = 0;
    std::size_t net_size = 0;
    std::vector<QuantizedMeasure> initial_counts;
    ActionSequence stages;
    double value = 0.0;
    std::vector<std::size_t> state_counts;
};

std::string policy_to_json(const PolicyDocument& doc);
PolicyDocument policy_from_json(const std::string& bytes);
void save_policy(const std::string& path, const PolicyDocument& doc);
PolicyDocument load_policy(const std::string& path);

/// Minimal CSV writer with round-trip float formatting.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    const std::string& str() const { return buffer_; }

    static std::string format(double value);
    static std::string format(unsigned long long value);

private:
    std::string buffer_;
    std::size_t columns_ = 0;
};

} // namespace liftdp
