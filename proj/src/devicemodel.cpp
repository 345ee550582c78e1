// Copyright 2026 The sivstrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sivstrain/devicemodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sivstrain/error.hpp"
#include "sivstrain/format.hpp"

namespace sivstrain {

void SpectraSeries::validate() const {
    const std::vector<std::string> keys = family == LineFamily::ABCD
                                              ? std::vector<std::string>{"A", "B", "C", "D"}
                                              : std::vector<std::string>{"C1", "C2", "C3", "C4"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& k : keys) {
            if (!rows[i].lines.count(k)) {
                throw SchemaError("row " + std::to_string(i + 1) + " lacks line " + k,
                                  static_cast<int>(i + 1));
            }
        }
    }
    if (rows.size() < 2) return;
    const bool increasing = rows[1].control > rows[0].control;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double step = rows[i].control - rows[i - 1].control;
        if (step == 0.0 || (step > 0.0) != increasing) {
            throw SchemaError("control values must be strictly monotonic (row " +
                                  std::to_string(i + 1) + ")",
                              static_cast<int>(i + 1));
        }
    }
}

bool SpectraSeries::has_strain() const {
    return !rows.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const SpectraRow& r) { return r.strain.has_value(); });
}

namespace device {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;
};

CsvTable read_table(std::istream& in) {
    CsvTable t;
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        first = false;
        const std::string s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        if (t.header.empty()) {
            t.header = split(s);
        } else {
            t.rows.push_back(split(s));
            t.line_numbers.push_back(lineno);
        }
    }
    if (t.header.empty()) throw SchemaError("empty file: no header found");
    return t;
}

double parse_cell(const std::string& cell, int row, const std::string& column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw SchemaError("row " + std::to_string(row) + ": non-numeric value '" + cell +
                              "' in column " + column,
                          row);
    }
    return v;
}

std::string join(const std::vector<std::string>& cols) {
    std::string s;
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
    return s;
}

const std::vector<std::string> kStrainColumns = {"exx", "eyy", "ezz", "eyz", "ezx", "exy"};

template <typename F>
auto with_input(const std::string& path, F&& reader) {
    if (path == "-") return reader(std::cin);
    std::ifstream f(path);
    if (!f) throw SchemaError("cannot open '" + path + "'");
    return reader(f);
}

frames::StrainTensor strain_from_cells(const std::vector<std::string>& cells, std::size_t offset,
                                       int row) {
    frames::StrainTensor::Components c{};
    for (std::size_t k = 0; k < 6; ++k) c[k] = parse_cell(cells[offset + k], row, kStrainColumns[k]);
    try {
        return frames::StrainTensor(c, frames::Frame::crystal());
    } catch (const ValidationError& e) {
        throw SchemaError("row " + std::to_string(row) + ": " + e.what(), row);
    }
}

void check_monotonic(const std::vector<double>& controls, const std::vector<int>& rows) {
    if (controls.size() < 2) return;
    const bool increasing = controls[1] > controls[0];
    for (std::size_t i = 1; i < controls.size(); ++i) {
        const double step = controls[i] - controls[i - 1];
        if (step == 0.0 || (step > 0.0) != increasing) {
            throw SchemaError("row " + std::to_string(rows[i]) +
                                  ": control values must be strictly monotonic",
                              rows[i]);
        }
    }
}

}  // namespace

void BeamSurrogate::validate() const {
    if (!(gain >= 0.0) || !std::isfinite(gain)) throw ValidationError("beam gain must be >= 0");
    if (!(poisson >= 0.0 && poisson < 0.5)) throw ValidationError("Poisson ratio must lie in [0, 0.5)");
    if (std::abs(load_axis.norm() - 1.0) > 1e-9) throw ValidationError("load axis must be a unit vector");
}

frames::StrainTensor surrogate_strain(double volts, const BeamSurrogate& beam) {
    beam.validate();
    if (!std::isfinite(volts)) throw ValidationError("voltage must be finite");
    const frames::Mat3 nn = beam.load_axis * beam.load_axis.transpose();
    const frames::Mat3 m = beam.gain * volts * volts * (nn - beam.poisson * (frames::Mat3::Identity() - nn));
    return frames::StrainTensor::from_matrix(m, frames::Frame::crystal());
}

StrainTrajectory::StrainTrajectory(std::vector<TrajectoryRow> rows) : rows_(std::move(rows)) {
    if (rows_.size() < 2) throw ValidationError("a strain trajectory needs at least two rows");
    std::vector<double> controls;
    std::vector<int> numbers;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!rows_[i].strain.frame().is_crystal()) {
            throw FrameMismatchError("trajectory strain must be in the crystal frame");
        }
        controls.push_back(rows_[i].control);
        numbers.push_back(static_cast<int>(i + 1));
    }
    check_monotonic(controls, numbers);
}

double StrainTrajectory::min_control() const {
    return std::min(rows_.front().control, rows_.back().control);
}

double StrainTrajectory::max_control() const {
    return std::max(rows_.front().control, rows_.back().control);
}

frames::StrainTensor StrainTrajectory::strain_at(double control) const {
    if (!(control >= min_control() && control <= max_control())) {
        throw RangeError("control " + format_number(control) + " outside trajectory range [" +
                         format_number(min_control()) + ", " + format_number(max_control()) + "]");
    }
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        const double a = rows_[i - 1].control;
        const double b = rows_[i].control;
        if ((control - a) * (control - b) <= 0.0) {
            const double w = (control - a) / (b - a);
            if (w == 0.0) return rows_[i - 1].strain;
            if (w == 1.0) return rows_[i].strain;
            const auto& lo = rows_[i - 1].strain.components();
            const auto& hi = rows_[i].strain.components();
            frames::StrainTensor::Components c{};
            for (std::size_t k = 0; k < 6; ++k) c[k] = (1.0 - w) * lo[k] + w * hi[k];
            return frames::StrainTensor(c, frames::Frame::crystal());
        }
    }
    return rows_.back().strain;
}

StrainTrajectory read_strain_trajectory(std::istream& in) {
    const CsvTable t = read_table(in);
    if (join(t.header) != kTrajectoryHeader) {
        throw SchemaError(std::string("trajectory header must be '") + kTrajectoryHeader + "'");
    }
    std::vector<TrajectoryRow> rows;
    std::vector<double> controls;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const int row = t.line_numbers[i];
        if (t.rows[i].size() != 7) {
            throw SchemaError("row " + std::to_string(row) + ": expected 7 columns", row);
        }
        rows.push_back({parse_cell(t.rows[i][0], row, "control_v"), strain_from_cells(t.rows[i], 1, row)});
        controls.push_back(rows.back().control);
    }
    check_monotonic(controls, t.line_numbers);
    if (rows.size() < 2) throw SchemaError("a strain trajectory needs at least two rows");
    return StrainTrajectory(std::move(rows));
}

StrainTrajectory load_strain_trajectory(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_strain_trajectory(in); });
}

void write_strain_trajectory(std::ostream& out, const StrainTrajectory& traj) {
    out << kTrajectoryHeader << '\n';
    for (const auto& r : traj.rows()) {
        out << format_number(r.control);
        for (double c : r.strain.components()) out << ',' << format_number(c);
        out << '\n';
    }
}

SpectraSeries read_spectra(std::istream& in) {
    const CsvTable t = read_table(in);
    const auto& h = t.header;
    const bool quad = std::find(h.begin(), h.end(), "line_C1") != h.end();
    SpectraSeries series;
    series.family = quad ? LineFamily::CQuadruplet : LineFamily::ABCD;
    const std::vector<std::string> labels = quad ? std::vector<std::string>{"C1", "C2", "C3", "C4"}
                                                 : std::vector<std::string>{"A", "B", "C", "D"};
    std::vector<std::string> expected = {"control_v"};
    for (const auto& l : labels) expected.push_back("line_" + l);
    for (const auto& col : expected) {
        if (std::find(h.begin(), h.end(), col) == h.end()) {
            throw SchemaError("missing required column '" + col + "'");
        }
    }
    std::vector<std::string> with_strain = expected;
    with_strain.insert(with_strain.end(), kStrainColumns.begin(), kStrainColumns.end());
    const bool strain = h == with_strain;
    if (!strain && h != expected) {
        throw SchemaError("unexpected spectra header '" + join(h) + "'; expected '" + join(expected) +
                          "' optionally followed by " + join(kStrainColumns));
    }

    std::vector<double> controls;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const int row = t.line_numbers[i];
        const auto& cells = t.rows[i];
        if (cells.size() != h.size()) {
            throw SchemaError("row " + std::to_string(row) + ": expected " + std::to_string(h.size()) +
                                  " columns",
                              row);
        }
        SpectraRow r;
        r.control = parse_cell(cells[0], row, "control_v");
        for (std::size_t k = 0; k < labels.size(); ++k) {
            r.lines[labels[k]] = parse_cell(cells[1 + k], row, expected[1 + k]);
        }
        if (strain) r.strain = strain_from_cells(cells, 1 + labels.size(), row);
        controls.push_back(r.control);
        series.rows.push_back(std::move(r));
    }
    check_monotonic(controls, t.line_numbers);
    return series;
}

SpectraSeries load_spectra(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_spectra(in); });
}

void write_spectra(std::ostream& out, const SpectraSeries& series) {
    const std::vector<std::string> labels = series.family == LineFamily::CQuadruplet
                                                ? std::vector<std::string>{"C1", "C2", "C3", "C4"}
                                                : std::vector<std::string>{"A", "B", "C", "D"};
    const bool strain = series.has_strain();
    out << "control_v";
    for (const auto& l : labels) out << ",line_" << l;
    if (strain) out << ',' << join(kStrainColumns);
    out << '\n';
    for (const auto& r : series.rows) {
        out << format_number(r.control);
        for (const auto& l : labels) out << ',' << format_number(r.lines.at(l));
        if (strain) {
            for (double c : r.strain->components()) out << ',' << format_number(c);
        }
        out << '\n';
    }
}

}  // namespace device
}  // namespace sivstrain
