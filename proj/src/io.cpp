#include "io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bandtest {

namespace {

std::string strip(const std::string& line) {
    std::string out = line;
    if (const auto hash = out.find('#'); hash != std::string::npos) out.erase(hash);
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    std::size_t start = 0;
    while (start < out.size() && std::isspace(static_cast<unsigned char>(out[start]))) ++start;
    return out.substr(start);
}

double parse_double(const std::string& token, const std::string& path, std::size_t line_no) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<double> load_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sample file: " + path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = strip(line);
        if (body.empty()) continue;
        values.push_back(parse_double(body, path, line_no));
    }
    if (values.empty()) throw EmptyInput("sample file has no values: " + path);
    return values;
}

CdfBand load_band_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open band file: " + path);
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> knots, lower, upper;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = strip(line);
        if (body.empty()) continue;
        if (!saw_header) {
            if (body != "knot,lower,upper") {
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": expected header 'knot,lower,upper'");
            }
            saw_header = true;
            continue;
        }
        std::istringstream fields(body);
        std::string tok;
        double row[3];
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(fields, tok, ',')) {
                throw ParseError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
            }
            row[c] = parse_double(tok, path, line_no);
        }
        if (std::getline(fields, tok, ',')) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
        }
        knots.push_back(row[0]);
        lower.push_back(row[1]);
        upper.push_back(row[2]);
    }
    if (!saw_header) throw ParseError(path + ": missing header");
    if (knots.empty()) throw ParseError(path + ": band has no knots");
    try {
        // Crossed columns load fine; they surface as InfeasibleBand at use.
        return CdfBand(StepCdf(knots, lower), StepCdf(knots, upper));
    } catch (const RangeError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_band_csv(const CdfBand& band, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write band file: " + path);
    out << "knot,lower,upper\n";
    for (double x : merged_knots(band.lower(), band.upper(), StepCdf())) {
        out << format_double(x) << ',' << format_double(eval_right(band.lower(), x)) << ','
            << format_double(eval_right(band.upper(), x)) << '\n';
    }
    if (!out) throw IoError("failed writing band file: " + path);
}

}  // namespace bandtest
