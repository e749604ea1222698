// SPDX-License-Identifier: Apache-2.0
//
// sarsub: quantitative signal-subspace SAR imaging toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "sarsub/io.hpp"

#include "sarsub/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sarsub {

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string &text)
{
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    const char *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, x);
    if (res.ec != std::errc{} || res.ptr != end)
        throw IoError("not a number: '" + text + "'");
    return x;
}

void CsvTable::add_row(std::vector<std::string> row)
{
    if (row.size() != columns.size())
        throw DimensionError("csv row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string &name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    throw IoError("csv has no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string &name) const
{
    return parse_double(rows.at(row).at(column(name)));
}

namespace {

void write_row(std::ostream &os, const std::vector<std::string> &cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            os << ',';
        os << cells[i];
    }
    os << '\n';
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::ofstream open_out(const std::filesystem::path &path)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

std::ifstream open_in(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + path.string() + "' for reading");
    return is;
}

void finish(std::ofstream &os, const std::filesystem::path &path)
{
    os.flush();
    if (!os)
        throw IoError("write failed for '" + path.string() + "'");
}

void read_body(std::istream &is, CsvTable &table, const std::filesystem::path &path)
{
    std::string line;
    if (!std::getline(is, line))
        throw IoError("'" + path.string() + "' has no header row");
    table.columns = split(line);
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        auto cells = split(line);
        if (cells.size() != table.columns.size())
            throw IoError("'" + path.string() + "': ragged row");
        table.rows.push_back(std::move(cells));
    }
}

} // namespace

void write_csv(const std::filesystem::path &path, const CsvTable &table)
{
    auto os = open_out(path);
    write_row(os, table.columns);
    for (const auto &row : table.rows)
        write_row(os, row);
    finish(os, path);
}

CsvTable read_csv(const std::filesystem::path &path)
{
    auto is = open_in(path);
    CsvTable table;
    read_body(is, table, path);
    return table;
}

void write_json(const std::filesystem::path &path, const Json &value)
{
    auto os = open_out(path);
    os << value.dump(2) << '\n';
    finish(os, path);
}

Json read_json(const std::filesystem::path &path)
{
    auto is = open_in(path);
    try {
        return Json::parse(is);
    } catch (const nlohmann::json::exception &e) {
        throw IoError("'" + path.string() + "': " + e.what());
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path &path)
{
    return std::filesystem::path(path.string() + ".json");
}

Json to_json(const AcquisitionConfig &c)
{
    Json j;
    j["wave_speed_c"] = c.wave_speed_c;
    j["center_frequency_f0"] = c.center_frequency_f0;
    j["bandwidth_B"] = c.bandwidth_B;
    j["num_freq_M"] = c.num_freq_M;
    j["num_positions_N"] = c.num_positions_N;
    j["aperture_a"] = c.aperture_a;
    j["range_offset_R"] = c.range_offset_R;
    j["height_H"] = c.height_H;
    return j;
}

namespace {

// JSON has no inf/nan, so non-finite values travel as strings.
Json number(double x)
{
    if (std::isfinite(x))
        return x;
    return format_double(x);
}

double number_from(const Json &j)
{
    if (j.is_string())
        return parse_double(j.get<std::string>());
    return j.get<double>();
}

} // namespace

Json to_json(const ImageMetadata &m)
{
    Json j;
    j["functional"] = to_string(m.functional);
    j["epsilon"] = std::isnan(m.epsilon) ? Json() : Json(m.epsilon);
    j["tau_gap"] = std::isnan(m.tau_gap) ? Json() : Json(m.tau_gap);
    j["x_d"] = std::isnan(m.x_d) ? Json() : Json(m.x_d);
    j["omega_d"] = std::isnan(m.omega_d) ? Json() : Json(m.omega_d);
    j["noise_seed"] = m.noise_seed;
    j["medium_seed"] = m.medium_seed;
    j["realization"] = m.realization;
    j["k0"] = m.k0;
    j["geometry_hash"] = m.geometry_hash;
    return j;
}

void write_cube(const std::filesystem::path &path, const DataCube &cube)
{
    const auto &g = cube.geometry;
    Json h;
    h["format"] = "sarsub-cube";
    h["version"] = 1;
    h["M"] = g.num_freq_M();
    h["N"] = g.num_positions();
    h["acquisition"] = to_json(g.config());
    h["frequencies"] = Json::array();
    for (double w : g.frequencies())
        h["frequencies"].push_back(w);
    h["positions"] = Json::array();
    for (const auto &x : g.positions())
        h["positions"].push_back({x.x(), x.y(), x.z()});
    const auto &p = cube.provenance;
    h["provenance"] = {{"scene_hash", p.scene_hash},
                       {"perturbation_model", p.perturbation_model},
                       {"snr_db", number(p.snr_db)},
                       {"noise_seed", p.noise_seed},
                       {"medium_seed", p.medium_seed}};

    auto os = open_out(path);
    os << h.dump() << '\n';
    os << "m,n,re,im\n";
    for (Eigen::Index n = 0; n < cube.values.cols(); ++n)
        for (Eigen::Index m = 0; m < cube.values.rows(); ++m) {
            const Complex v = cube.values(m, n);
            os << m << ',' << n << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
    finish(os, path);
}

DataCube read_cube(const std::filesystem::path &path)
{
    auto is = open_in(path);
    std::string line;
    if (!std::getline(is, line))
        throw IoError("'" + path.string() + "' is empty");
    Json h;
    try {
        h = Json::parse(line);
    } catch (const nlohmann::json::exception &e) {
        throw IoError("'" + path.string() + "': bad cube header: " + e.what());
    }
    if (h.value("format", "") != "sarsub-cube")
        throw IoError("'" + path.string() + "' is not a cube file");

    try {
        const auto &a = h.at("acquisition");
        AcquisitionConfig c;
        c.wave_speed_c = a.at("wave_speed_c").get<double>();
        c.center_frequency_f0 = a.at("center_frequency_f0").get<double>();
        c.bandwidth_B = a.at("bandwidth_B").get<double>();
        c.num_freq_M = a.at("num_freq_M").get<int>();
        c.num_positions_N = a.at("num_positions_N").get<int>();
        c.aperture_a = a.at("aperture_a").get<double>();
        c.range_offset_R = a.at("range_offset_R").get<double>();
        c.height_H = a.at("height_H").get<double>();

        DataCube cube{Eigen::MatrixXcd::Zero(2 * c.num_freq_M - 1, c.num_positions_N),
                      AcquisitionGeometry::build(c), {}};
        const auto freqs = cube.geometry.frequencies();
        const auto &hf = h.at("frequencies");
        if (hf.size() != freqs.size())
            throw IoError("'" + path.string() + "': frequency list does not match the acquisition");
        for (std::size_t i = 0; i < freqs.size(); ++i)
            if (hf[i].get<double>() != freqs[i])
                throw IoError("'" + path.string() + "': frequency list does not match the acquisition");

        const auto &p = h.at("provenance");
        cube.provenance.scene_hash = p.at("scene_hash").get<std::string>();
        cube.provenance.perturbation_model = p.at("perturbation_model").get<std::string>();
        cube.provenance.snr_db = number_from(p.at("snr_db"));
        cube.provenance.noise_seed = p.at("noise_seed").get<std::uint64_t>();
        cube.provenance.medium_seed = p.at("medium_seed").get<std::uint64_t>();

        CsvTable body;
        read_body(is, body, path);
        if (body.rows.size() != static_cast<std::size_t>(cube.values.size()))
            throw IoError("'" + path.string() + "': expected " + std::to_string(cube.values.size()) + " entries");
        const auto cm = body.column("m"), cn = body.column("n"), cr = body.column("re"), ci = body.column("im");
        for (const auto &row : body.rows) {
            const long m = std::stol(row[cm]);
            const long n = std::stol(row[cn]);
            if (m < 0 || n < 0 || m >= cube.values.rows() || n >= cube.values.cols())
                throw IoError("'" + path.string() + "': entry index out of range");
            cube.values(m, n) = Complex(parse_double(row[cr]), parse_double(row[ci]));
        }
        return cube;
    } catch (const nlohmann::json::exception &e) {
        throw IoError("'" + path.string() + "': " + e.what());
    } catch (const std::logic_error &e) {
        // stol failures and configuration errors from a corrupted header
        throw IoError("'" + path.string() + "': " + e.what());
    }
}

CsvTable image_table(const ImageGrid &image)
{
    CsvTable t;
    t.columns = image.complex_valued ? std::vector<std::string>{"x", "y", "value_re", "value_im"}
                                     : std::vector<std::string>{"x", "y", "value"};
    t.rows.reserve(image.values.size());
    std::size_t i = 0;
    for (int iy = 0; iy < image.grid.ny; ++iy)
        for (int ix = 0; ix < image.grid.nx; ++ix, ++i) {
            const Vec3 p = image.grid.point(ix, iy);
            if (image.complex_valued)
                t.rows.push_back({cell(p.x()), cell(p.y()), cell(image.values[i].real()),
                                  cell(image.values[i].imag())});
            else
                t.rows.push_back({cell(p.x()), cell(p.y()), cell(image.values[i].real())});
        }
    return t;
}

CsvTable spectrum_table(const BlockSVD &svd, const RegularizedSpectrum &spectrum)
{
    if (svd.factors.size() != spectrum.inverse.size())
        throw DimensionError("spectrum and SVD have different block counts");
    CsvTable t;
    t.columns = {"block", "index", "sigma", "sigma_thresholded", "inverse", "signal"};
    for (std::size_t n = 0; n < svd.factors.size(); ++n) {
        const auto &s = svd.factors[n].singular_values;
        const double s1 = s.size() ? s(0) : 0.0;
        for (Eigen::Index j = 0; j < s.size(); ++j) {
            const bool signal = j < spectrum.rank[n];
            t.rows.push_back({cell(n), cell(static_cast<int>(j)), cell(s(j)),
                              cell(signal ? s(j) : spectrum.epsilon * s1), cell(spectrum.inverse[n](j)),
                              cell(signal ? 1 : 0)});
        }
    }
    return t;
}

} // namespace sarsub
