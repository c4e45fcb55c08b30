#include "qkdopt/csv.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qkdopt {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

struct CsvReader {
    std::string path;
    std::ifstream in;
    std::vector<std::string> header;
    int row = 0;  // 1-based data row

    CsvReader(const std::string& p, const std::vector<std::string>& expected) : path(p), in(p) {
        if (!in) throw CsvError(p + ": cannot open file");
        std::string line;
        if (!std::getline(in, line)) throw CsvError(p + ": empty file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        header = split_line(line);
        if (header != expected) {
            std::string want;
            for (std::size_t i = 0; i < expected.size(); ++i)
                want += (i ? "," : "") + expected[i];
            throw CsvError(p + ": expected header '" + want + "', got '" + line + "'");
        }
    }

    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            ++row;
            fields = split_line(line);
            if (fields.size() != header.size())
                throw CsvError(path + ": row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " columns, got " +
                               std::to_string(fields.size()));
            return true;
        }
        return false;
    }

    double num(const std::vector<std::string>& fields, std::size_t col) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(fields[col], &pos);
            if (pos != fields[col].size()) throw std::invalid_argument("trailing chars");
            return v;
        } catch (const std::exception&) {
            throw CsvError(path + ": row " + std::to_string(row) + ", column '" +
                           header[col] + "': not a number: '" + fields[col] + "'");
        }
    }
};

}  // namespace

std::vector<PassSample> read_pass_profile_csv(const std::string& path) {
    CsvReader reader(path, {"t_s", "loss_db", "background_cps"});
    std::vector<PassSample> samples;
    std::vector<std::string> f;
    while (reader.next(f))
        samples.push_back({reader.num(f, 0), reader.num(f, 1), reader.num(f, 2)});
    return samples;
}

std::vector<DetectorCatalogEntry> read_detector_catalog_csv(const std::string& path) {
    CsvReader reader(path,
                     {"name", "wavelength_nm", "time_resolution_ps", "efficiency", "dark_cps"});
    std::vector<DetectorCatalogEntry> entries;
    std::vector<std::string> f;
    while (reader.next(f))
        entries.push_back(
            {f[0], reader.num(f, 1), reader.num(f, 2), reader.num(f, 3), reader.num(f, 4)});
    return entries;
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    CsvReader reader(
        path, {"eta", "d", "eps_star", "p_tf_star", "skr_per_window", "mu", "feasible"});
    std::vector<SweepRow> rows;
    std::vector<std::string> f;
    while (reader.next(f)) {
        SweepRow row;
        row.eta = reader.num(f, 0);
        row.d = reader.num(f, 1);
        row.eps_star = reader.num(f, 2);
        row.p_tf_star = reader.num(f, 3);
        row.skr_per_window = reader.num(f, 4);
        row.mu = reader.num(f, 5);
        row.feasible = reader.num(f, 6) != 0.0;
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "eta,d,eps_star,p_tf_star,skr_per_window,mu,feasible\n";
    out << std::setprecision(12);
    for (const auto& r : rows)
        out << r.eta << ',' << r.d << ',' << r.eps_star << ',' << r.p_tf_star << ','
            << r.skr_per_window << ',' << r.mu << ',' << (r.feasible ? 1 : 0) << '\n';
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw CsvError(path + ": cannot open for writing");
    write_sweep_csv(out, rows);
}

}  // namespace qkdopt
