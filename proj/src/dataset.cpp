#include "ctgboost/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ctgboost/error.hpp"
#include "ctgboost/rng.hpp"
#include "text.hpp"

namespace ctgboost {

FeatureSchema FeatureSchema::canonical() {
    return FeatureSchema{
        {
            "baseline_value",
            "accelerations",
            "fetal_movement",
            "uterine_contractions",
            "light_decelerations",
            "severe_decelerations",
            "prolongued_decelerations",
            "abnormal_short_term_variability",
            "mean_value_of_short_term_variability",
            "percentage_of_time_with_abnormal_long_term_variability",
            "mean_value_of_long_term_variability",
            "histogram_width",
            "histogram_min",
            "histogram_max",
            "histogram_number_of_peaks",
            "histogram_number_of_zeroes",
            "histogram_mode",
            "histogram_mean",
            "histogram_median",
            "histogram_variance",
            "histogram_tendency",
        },
        "fetal_health",
    };
}

void FeatureSchema::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& name : predictors) {
        if (!seen.insert(name).second) throw Error(ErrorKind::InvalidConfig, "duplicate predictor '" + name + "'");
    }
    if (seen.contains(target)) throw Error(ErrorKind::InvalidConfig, "target '" + target + "' is also a predictor");
}

std::string normalize_column_name(std::string_view raw) {
    std::string out;
    bool pending_sep = false;
    for (char c : raw) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isspace(uc) || c == '_') {
            pending_sep = !out.empty();
            continue;
        }
        if (pending_sep) out.push_back('_');
        pending_sep = false;
        out.push_back(static_cast<char>(std::tolower(uc)));
    }
    // The public file spells it "prolongued"; accept the dictionary spelling too.
    if (out == "prolonged_decelerations") out = "prolongued_decelerations";
    return out;
}

Dataset::Dataset(std::vector<double> features, std::size_t n_features, std::vector<int> labels,
                 std::vector<std::uint64_t> row_ids)
    : n_features_(n_features), features_(std::move(features)), labels_(std::move(labels)), row_ids_(std::move(row_ids)) {
    if (features_.size() != labels_.size() * n_features_ || row_ids_.size() != labels_.size()) {
        throw Error(ErrorKind::LengthMismatch, "feature, label and row_id lengths disagree");
    }
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (!std::isfinite(features_[i])) {
            throw Error(ErrorKind::NonFiniteValue,
                        "row " + std::to_string(i / n_features_) + ", column " + std::to_string(i % n_features_));
        }
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] < 0 || labels_[i] >= kNumClasses) {
            throw Error(ErrorKind::InvalidLabel, "row " + std::to_string(i) + ": " + std::to_string(labels_[i]));
        }
    }
    std::unordered_set<std::uint64_t> ids(row_ids_.begin(), row_ids_.end());
    if (ids.size() != row_ids_.size()) throw Error(ErrorKind::InvalidConfig, "row_ids are not unique");
}

void Dataset::push_back(std::span<const double> row, int label, std::uint64_t row_id) {
    if (row.size() != n_features_) throw Error(ErrorKind::LengthMismatch, "row width differs from dataset width");
    features_.insert(features_.end(), row.begin(), row.end());
    labels_.push_back(label);
    row_ids_.push_back(row_id);
}

Dataset Dataset::subset(std::span<const std::size_t> positions) const {
    Dataset out(n_features_);
    out.features_.reserve(positions.size() * n_features_);
    out.labels_.reserve(positions.size());
    out.row_ids_.reserve(positions.size());
    for (std::size_t p : positions) out.push_back(row(p), labels_[p], row_ids_[p]);
    return out;
}

std::uint64_t Dataset::max_row_id() const {
    return row_ids_.empty() ? 0 : *std::max_element(row_ids_.begin(), row_ids_.end());
}

namespace {

// RFC-4180 records: quoted fields may contain commas, doubled quotes and newlines.
std::vector<std::vector<std::string>> split_records(std::string_view text, std::string_view source) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = record.size() == 1 && record[0].empty();
        if (!blank) records.push_back(std::move(record));
        record.clear();
    };

    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || field_was_quoted) {
                    throw Error(ErrorKind::UnparsableCell,
                                std::string(source) + ": stray quote on line " + std::to_string(line));
                }
                in_quotes = true;
                field_was_quoted = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field.push_back(c);
        }
    }
    if (in_quotes) throw Error(ErrorKind::UnparsableCell, std::string(source) + ": unterminated quoted field");
    if (!field.empty() || !record.empty()) end_record();
    return records;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_real(std::string_view cell, double& out) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return false;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return res.ec == std::errc{} && res.ptr == cell.data() + cell.size();
}

}  // namespace

Dataset parse_csv(std::string_view text, const FeatureSchema& schema, std::string_view source) {
    schema.validate();
    const auto records = split_records(text, source);
    if (records.empty()) throw Error(ErrorKind::MissingColumn, std::string(source) + ": no header row");

    std::unordered_map<std::string, std::size_t> header;
    for (std::size_t c = 0; c < records[0].size(); ++c) header.try_emplace(normalize_column_name(records[0][c]), c);

    auto column_of = [&](const std::string& name) {
        const auto it = header.find(normalize_column_name(name));
        if (it == header.end()) throw Error(ErrorKind::MissingColumn, name);
        return it->second;
    };
    std::vector<std::size_t> predictor_cols;
    for (const auto& name : schema.predictors) predictor_cols.push_back(column_of(name));
    const std::size_t target_col = column_of(schema.target);

    const std::size_t width = schema.predictors.size();
    const std::size_t n_rows = records.size() - 1;
    std::vector<double> features;
    std::vector<int> labels;
    std::vector<std::uint64_t> row_ids;
    features.reserve(n_rows * width);
    labels.reserve(n_rows);
    row_ids.reserve(n_rows);

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = "row " + std::to_string(r);
        if (rec.size() != records[0].size()) {
            throw Error(ErrorKind::UnparsableCell, where + ": expected " + std::to_string(records[0].size()) +
                                                       " fields, found " + std::to_string(rec.size()));
        }
        for (std::size_t f = 0; f < width; ++f) {
            double v = 0.0;
            if (!parse_real(rec[predictor_cols[f]], v)) {
                throw Error(ErrorKind::UnparsableCell,
                            where + ", column " + schema.predictors[f] + ": '" + rec[predictor_cols[f]] + "'");
            }
            if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteValue, where + ", column " + schema.predictors[f]);
            features.push_back(v);
        }
        double raw_label = 0.0;
        if (!parse_real(rec[target_col], raw_label)) {
            throw Error(ErrorKind::UnparsableCell, where + ", column " + schema.target + ": '" + rec[target_col] + "'");
        }
        if (raw_label != 1.0 && raw_label != 2.0 && raw_label != 3.0) {
            throw Error(ErrorKind::InvalidLabel, where + ": " + std::string(trim(rec[target_col])));
        }
        labels.push_back(static_cast<int>(raw_label) - 1);
        row_ids.push_back(r - 1);
    }
    return Dataset(std::move(features), width, std::move(labels), std::move(row_ids));
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema, path.string());
}

void write_csv(const Dataset& ds, const std::filesystem::path& path, const FeatureSchema& schema) {
    if (schema.predictors.size() != ds.n_features()) {
        throw Error(ErrorKind::LengthMismatch, "schema width differs from dataset width");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    for (const auto& name : schema.predictors) out << name << ',';
    out << schema.target << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.row(i)) out << text::round_trip(v) << ',';
        out << ds.label(i) + 1 << ".0\n";
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

ClassCounts class_counts(const Dataset& ds) {
    ClassCounts counts{};
    for (int y : ds.labels()) ++counts[static_cast<std::size_t>(y)];
    return counts;
}

ClassCounts stratified_test_quota(const ClassCounts& counts, double test_fraction) {
    if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "test_fraction must lie in [0, 1]");
    }
    std::size_t n = 0;
    for (auto c : counts) n += c;
    // Guard against 0.2 * 10 landing a hair above an integer.
    const auto total = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n) - 1e-9));

    ClassCounts quota{};
    std::array<double, kNumClasses> remainder{};
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double exact = test_fraction * static_cast<double>(counts[k]);
        quota[k] = std::min(counts[k], static_cast<std::size_t>(std::floor(exact + 1e-9)));
        remainder[k] = exact - static_cast<double>(quota[k]);
        assigned += quota[k];
    }
    while (assigned < total) {
        std::size_t best = counts.size();
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (quota[k] >= counts[k]) continue;
            if (best == counts.size() || remainder[k] > remainder[best]) best = k;
        }
        if (best == counts.size()) break;
        ++quota[best];
        remainder[best] = -1.0;
        ++assigned;
    }
    return quota;
}

SplitPair stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    if (ds.empty()) throw Error(ErrorKind::EmptyDataset, "cannot split an empty dataset");
    const ClassCounts quota = stratified_test_quota(class_counts(ds), test_fraction);

    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[static_cast<std::size_t>(ds.label(i))].push_back(i);

    Rng rng(seed);
    std::vector<bool> in_test(ds.size(), false);
    for (std::size_t k = 0; k < by_class.size(); ++k) {
        rng.shuffle(std::span(by_class[k]));
        for (std::size_t j = 0; j < quota[k]; ++j) in_test[by_class[k][j]] = true;
    }

    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < ds.size(); ++i) (in_test[i] ? test_rows : train_rows).push_back(i);
    return SplitPair{ds.subset(train_rows), ds.subset(test_rows), seed, test_fraction};
}

}  // namespace ctgboost
