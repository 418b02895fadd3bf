#include "dendrodist/ingest.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dd {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

namespace {

constexpr char kMagic[4] = {'D', 'D', 'E', '1'};

[[noreturn]] void fail(const fs::path& path, const std::string& message) {
    throw IoError(path.string() + ": " + message);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(path, "cannot open for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) {
        fail(path, "read failed");
    }
    return std::move(buffer).str();
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path.string() + ": cannot open for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) {
        throw IoError(path.string() + ": write failed");
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool parse_double(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    // from_chars rejects leading '+' and whitespace; keep tokens strict
    const auto result = std::from_chars(first, last, out);
    return result.ec == std::errc{} && result.ptr == last && !token.empty();
}

bool parse_u64(const std::string& token, std::uint64_t& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto result = std::from_chars(first, last, out);
    return result.ec == std::errc{} && result.ptr == last && !token.empty();
}

bool parse_u32(const std::string& token, std::uint32_t& out) {
    std::uint64_t wide = 0;
    if (!parse_u64(token, wide) || wide > 0xffffffffULL) {
        return false;
    }
    out = static_cast<std::uint32_t>(wide);
    return true;
}

bool parse_size(const std::string& token, std::size_t& out) {
    std::uint64_t wide = 0;
    if (!parse_u64(token, wide)) {
        return false;
    }
    out = static_cast<std::size_t>(wide);
    return true;
}

struct CsvTable {
    std::vector<std::string> header; // empty when the file has no header
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; // 1-based physical line per data row
};

/// Splits a CSV file into fields. The first line counts as a header when at
/// least one of its fields does not parse as a number.
CsvTable read_csv(const fs::path& path) {
    CsvTable table;
    const std::vector<std::string> lines = split_lines(read_file(path));
    bool first_content_line = true;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        std::vector<std::string> fields = split_fields(lines[i]);
        if (first_content_line) {
            first_content_line = false;
            const bool numeric = std::all_of(fields.begin(), fields.end(),
                                             [](const std::string& f) {
                                                 double ignored = 0.0;
                                                 return parse_double(f, ignored);
                                             });
            if (!numeric) {
                table.header = std::move(fields);
                continue;
            }
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(i + 1);
    }
    return table;
}

void append_u32_le(std::string& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<char>((v >> shift) & 0xff));
    }
}

void append_f64_le(std::string& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int shift = 0; shift < 64; shift += 8) {
        out.push_back(static_cast<char>((bits >> shift) & 0xff));
    }
}

std::uint32_t take_u32_le(const std::string& bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
             << (8 * i);
    }
    return v;
}

double take_f64_le(const std::string& bytes, std::size_t offset) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i]))
             << (8 * i);
    }
    return std::bit_cast<double>(v);
}

PointSet load_points_csv(const fs::path& path) {
    const CsvTable table = read_csv(path);
    if (table.rows.empty()) {
        fail(path, "no data rows");
    }
    const bool has_labels = !table.header.empty() && table.header.back() == "label";
    const std::size_t columns =
        table.header.empty() ? table.rows.front().size() : table.header.size();
    const std::size_t dims = has_labels ? columns - 1 : columns;
    if (dims < 1) {
        fail(path, "no coordinate columns");
    }

    Matrix points(static_cast<Eigen::Index>(table.rows.size()),
                  static_cast<Eigen::Index>(dims));
    std::optional<std::vector<std::uint32_t>> labels;
    if (has_labels) {
        labels.emplace();
        labels->reserve(table.rows.size());
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::vector<std::string>& fields = table.rows[r];
        const std::string line_tag = "line " + std::to_string(table.line_numbers[r]);
        if (fields.size() != columns) {
            fail(path, line_tag + ": expected " + std::to_string(columns) +
                           " columns, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < dims; ++c) {
            double v = 0.0;
            if (!parse_double(fields[c], v)) {
                fail(path, line_tag + ": cannot parse '" + fields[c] + "' as a real");
            }
            if (!std::isfinite(v)) {
                fail(path, line_tag + ": non-finite value '" + fields[c] + "'");
            }
            points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
        if (has_labels) {
            std::uint32_t label = 0;
            if (!parse_u32(fields.back(), label)) {
                fail(path, line_tag + ": label '" + fields.back() +
                               "' is not a non-negative integer");
            }
            labels->push_back(label);
        }
    }
    try {
        return PointSet(std::move(points), std::move(labels), path.filename().string());
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

PointSet load_points_f64bin(const fs::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 13) {
        fail(path, "file too short for an f64bin header");
    }
    if (!std::equal(kMagic, kMagic + 4, bytes.begin())) {
        fail(path, "bad magic bytes (expected \"DDE1\")");
    }
    const std::size_t n = take_u32_le(bytes, 4);
    const std::size_t dims = take_u32_le(bytes, 8);
    const unsigned char has_labels = static_cast<unsigned char>(bytes[12]);
    if (has_labels > 1) {
        fail(path, "has_labels flag must be 0 or 1");
    }
    const std::size_t expected =
        13 + n * dims * 8 + (has_labels ? n * 4 : std::size_t{0});
    if (bytes.size() != expected) {
        fail(path, "size mismatch: expected " + std::to_string(expected) +
                       " bytes for n=" + std::to_string(n) + ", d=" +
                       std::to_string(dims) + ", got " + std::to_string(bytes.size()));
    }

    Matrix points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dims));
    std::size_t offset = 13;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < dims; ++c) {
            const double v = take_f64_le(bytes, offset);
            offset += 8;
            if (!std::isfinite(v)) {
                fail(path, "non-finite value at row " + std::to_string(r));
            }
            points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    std::optional<std::vector<std::uint32_t>> labels;
    if (has_labels) {
        labels.emplace();
        labels->reserve(n);
        for (std::size_t r = 0; r < n; ++r) {
            labels->push_back(take_u32_le(bytes, offset));
            offset += 4;
        }
    }
    try {
        return PointSet(std::move(points), std::move(labels), path.filename().string());
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

} // namespace

PointSet load_points(const fs::path& path, PointFormat format) {
    return format == PointFormat::csv ? load_points_csv(path)
                                      : load_points_f64bin(path);
}

PointSet load_points(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(path, "cannot open for reading");
    }
    char head[4] = {0, 0, 0, 0};
    in.read(head, 4);
    const bool binary = in.gcount() == 4 && std::equal(kMagic, kMagic + 4, head);
    in.close();
    return load_points(path, binary ? PointFormat::f64bin : PointFormat::csv);
}

void save_points(const PointSet& x, const fs::path& path, PointFormat format) {
    std::string out;
    if (format == PointFormat::csv) {
        for (std::size_t c = 0; c < x.dim(); ++c) {
            if (c > 0) {
                out += ',';
            }
            out += "x" + std::to_string(c);
        }
        if (x.has_labels()) {
            out += ",label";
        }
        out += '\n';
        for (std::size_t r = 0; r < x.size(); ++r) {
            for (std::size_t c = 0; c < x.dim(); ++c) {
                if (c > 0) {
                    out += ',';
                }
                out += format_double(x.points()(static_cast<Eigen::Index>(r),
                                                static_cast<Eigen::Index>(c)));
            }
            if (x.has_labels()) {
                out += ',' + std::to_string(x.labels()[r]);
            }
            out += '\n';
        }
    } else {
        out.assign(kMagic, kMagic + 4);
        append_u32_le(out, static_cast<std::uint32_t>(x.size()));
        append_u32_le(out, static_cast<std::uint32_t>(x.dim()));
        out.push_back(x.has_labels() ? char{1} : char{0});
        for (std::size_t r = 0; r < x.size(); ++r) {
            for (std::size_t c = 0; c < x.dim(); ++c) {
                append_f64_le(out, x.points()(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(c)));
            }
        }
        if (x.has_labels()) {
            for (std::uint32_t label : x.labels()) {
                append_u32_le(out, label);
            }
        }
    }
    write_file(path, out);
}

Matrix load_probs(const fs::path& path) {
    const CsvTable table = read_csv(path);
    if (table.rows.empty()) {
        fail(path, "no data rows");
    }
    const std::size_t columns = table.rows.front().size();
    Matrix probs(static_cast<Eigen::Index>(table.rows.size()),
                 static_cast<Eigen::Index>(columns));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string line_tag = "line " + std::to_string(table.line_numbers[r]);
        if (table.rows[r].size() != columns) {
            fail(path, line_tag + ": expected " + std::to_string(columns) +
                           " columns, found " + std::to_string(table.rows[r].size()));
        }
        double sum = 0.0;
        for (std::size_t c = 0; c < columns; ++c) {
            double v = 0.0;
            if (!parse_double(table.rows[r][c], v) || !std::isfinite(v)) {
                fail(path, line_tag + ": cannot parse '" + table.rows[r][c] +
                               "' as a probability");
            }
            if (v < 0.0 || v > 1.0) {
                fail(path, line_tag + ": probability " + format_double(v) +
                               " outside [0, 1]");
            }
            probs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            fail(path, line_tag + ": probabilities sum to " + format_double(sum) +
                           " (must be 1 within 1e-6)");
        }
    }
    return probs;
}

void save_linkage(const Dendrogram& dendro, const fs::path& path) {
    std::string out = "left_id,right_id,height,size\n";
    for (const MergeRecord& rec : dendro.merges()) {
        out += std::to_string(rec.left_id) + ',' + std::to_string(rec.right_id) + ',' +
               format_double(rec.height) + ',' + std::to_string(rec.merged_size) + '\n';
    }
    write_file(path, out);
}

Dendrogram load_linkage(const fs::path& path) {
    const CsvTable table = read_csv(path);
    if (table.rows.empty()) {
        fail(path, "no merge rows");
    }
    std::vector<MergeRecord> merges;
    merges.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string line_tag = "line " + std::to_string(table.line_numbers[r]);
        if (table.rows[r].size() != 4) {
            fail(path, line_tag + ": expected 4 columns");
        }
        MergeRecord rec{};
        if (!parse_size(table.rows[r][0], rec.left_id) ||
            !parse_size(table.rows[r][1], rec.right_id) ||
            !parse_double(table.rows[r][2], rec.height) ||
            !parse_size(table.rows[r][3], rec.merged_size)) {
            fail(path, line_tag + ": malformed merge record");
        }
        merges.push_back(rec);
    }
    const std::size_t n_leaves = merges.size() + 1;
    try {
        return Dendrogram(n_leaves, std::move(merges));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

namespace {

/// RFC-4180 quoting for the one CSV field that may contain commas.
std::string quote_csv(const std::string& raw) {
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') {
            quoted += "\"\"";
        } else {
            quoted += c;
        }
    }
    quoted += '"';
    return quoted;
}

Json row_to_json(const SweepRow& row) {
    return Json{{"experiment_id", row.experiment_id}, {"mode_count", row.mode_count},
                {"alpha", row.alpha},                 {"repetition", row.repetition},
                {"seed", row.seed},                   {"metric_name", row.metric_name},
                {"value", row.value}};
}

} // namespace

void save_report(const MetricReport& report, const fs::path& path, ReportFormat format) {
    if (format == ReportFormat::json) {
        const Json j{{"metric_name", report.metric_name},
                     {"value", report.value},
                     {"aux", report.aux}};
        write_file(path, j.dump(2) + "\n");
    } else {
        std::string out = "metric_name,value,aux\n";
        out += report.metric_name + ',' + format_double(report.value) + ',' +
               quote_csv(report.aux.dump()) + '\n';
        write_file(path, out);
    }
}

void save_report(const SweepResult& result, const fs::path& path, ReportFormat format) {
    if (format == ReportFormat::json) {
        Json rows = Json::array();
        for (const SweepRow& row : result.rows()) {
            rows.push_back(row_to_json(row));
        }
        const Json j{{"config", result.config()}, {"rows", rows}};
        write_file(path, j.dump(2) + "\n");
        return;
    }
    std::string out = "# config: " + result.config().dump() + "\n";
    out += "experiment_id,mode_count,alpha,repetition,seed,metric_name,value\n";
    for (const SweepRow& row : result.rows()) {
        out += row.experiment_id + ',' + std::to_string(row.mode_count) + ',' +
               format_double(row.alpha) + ',' + std::to_string(row.repetition) + ',' +
               std::to_string(row.seed) + ',' + row.metric_name + ',' +
               format_double(row.value) + '\n';
    }
    write_file(path, out);
}

MetricReport load_report_json(const fs::path& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        fail(path, std::string("invalid JSON: ") + e.what());
    }
    try {
        return MetricReport(j.at("metric_name").get<std::string>(),
                            j.at("value").get<double>(),
                            j.value("aux", Json::object()));
    } catch (const Json::exception& e) {
        fail(path, std::string("not a metric report: ") + e.what());
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

SweepResult load_sweep_csv(const fs::path& path) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    Json config = Json::object();
    std::vector<SweepRow> rows;
    bool header_seen = false;
    const std::string config_prefix = "# config: ";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# ", 0) == 0 || line[0] == '#') {
            if (line.rfind(config_prefix, 0) == 0) {
                try {
                    config = Json::parse(line.substr(config_prefix.size()));
                } catch (const Json::parse_error& e) {
                    fail(path, std::string("invalid config JSON: ") + e.what());
                }
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const std::vector<std::string> fields = split_fields(line);
        const std::string line_tag = "line " + std::to_string(i + 1);
        if (fields.size() != 7) {
            fail(path, line_tag + ": expected 7 columns");
        }
        SweepRow row;
        row.experiment_id = fields[0];
        row.metric_name = fields[5];
        if (!parse_size(fields[1], row.mode_count) ||
            !parse_double(fields[2], row.alpha) ||
            !parse_size(fields[3], row.repetition) || !parse_u64(fields[4], row.seed) ||
            !parse_double(fields[6], row.value)) {
            fail(path, line_tag + ": malformed sweep row");
        }
        rows.push_back(std::move(row));
    }
    try {
        return SweepResult(std::move(rows), std::move(config));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

void save_summary(const std::vector<SummaryRow>& summary, const fs::path& path) {
    std::string out = "mode_count,alpha,metric_name,mean,std,min,max,n\n";
    for (const SummaryRow& row : summary) {
        out += std::to_string(row.mode_count) + ',' + format_double(row.alpha) + ',' +
               row.metric_name + ',' + format_double(row.mean) + ',' +
               format_double(row.stddev) + ',' + format_double(row.min) + ',' +
               format_double(row.max) + ',' + std::to_string(row.count) + '\n';
    }
    write_file(path, out);
}

} // namespace dd
