#include "monotone_ei/io.hpp"

#include <fstream>
#include <sstream>

#include "monotone_ei/errors.hpp"

namespace monotone_ei {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_number(const std::string& field, std::size_t line_no, const std::string& column) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw validation_error("line " + std::to_string(line_no) + ": cannot parse " + column +
                               " value '" + field + "'");
    }
}

std::vector<std::string> read_header(std::istream& in, std::size_t& line_no) {
    std::string line;
    if (!std::getline(in, line)) throw validation_error("empty input");
    ++line_no;
    if (!line.empty() && static_cast<unsigned char>(line[0]) == 0xEF && line.size() >= 3) {
        line.erase(0, 3);  // UTF-8 BOM
    }
    std::vector<std::string> header = split_line(line);
    for (std::string& h : header) {
        for (char& c : h) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return header;
}

}  // namespace

std::vector<TableRow> read_aggregate_table(std::istream& in) {
    std::size_t line_no = 0;
    const std::vector<std::string> header = read_header(in, line_no);
    const std::vector<std::string> expected = {"id", "population", "x_share", "y_mean"};
    if (header != expected) {
        throw validation_error("expected header 'id,population,x_share,y_mean'");
    }
    std::vector<TableRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> f = split_line(line);
        if (f.size() != 4) {
            throw validation_error("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                                   std::to_string(f.size()));
        }
        TableRow row;
        row.id = f[0];
        row.population = parse_number(f[1], line_no, "population");
        row.x_share = parse_number(f[2], line_no, "x_share");
        row.y_mean = parse_number(f[3], line_no, "y_mean");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TableRow> read_aggregate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open input file '" + path + "'");
    return read_aggregate_table(in);
}

std::vector<MicroRecord> read_micro_table(std::istream& in) {
    std::size_t line_no = 0;
    const std::vector<std::string> header = read_header(in, line_no);
    bool has_weight = false;
    if (header == std::vector<std::string>{"x", "y", "x_n", "weight", "stratum"}) {
        has_weight = true;
    } else if (header != std::vector<std::string>{"x", "y", "x_n", "stratum"}) {
        throw validation_error("expected header 'x,y,x_n,weight,stratum' (weight optional)");
    }
    std::vector<MicroRecord> rows;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> f = split_line(line);
        const std::size_t expected = has_weight ? 5 : 4;
        if (f.size() != expected) {
            throw validation_error("line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(expected) + " fields, got " + std::to_string(f.size()));
        }
        MicroRecord rec;
        const double x = parse_number(f[0], line_no, "x");
        if (x != 0.0 && x != 1.0) {
            throw validation_error("line " + std::to_string(line_no) + ": x must be 0 or 1");
        }
        rec.x = static_cast<int>(x);
        rec.y = parse_number(f[1], line_no, "y");
        rec.xn = parse_number(f[2], line_no, "x_n");
        if (has_weight) {
            rec.weight = f[3].empty() ? 1.0 : parse_number(f[3], line_no, "weight");
            rec.stratum = f[4];
        } else {
            rec.weight = 1.0;
            rec.stratum = f[3];
        }
        rows.push_back(std::move(rec));
    }
    return rows;
}

std::vector<MicroRecord> read_micro_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open input file '" + path + "'");
    return read_micro_table(in);
}

}  // namespace monotone_ei
