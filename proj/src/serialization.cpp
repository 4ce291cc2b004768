// SPDX-License-Identifier: Apache-2.0
//
// ra-isac: joint beamforming and array rotation for rotatable-antenna ISAC
// Copyright (C) 2026 The ra-isac authors
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
#include "raisac/serialization.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace raisac
{
    namespace
    {
        // Strict object reader: remembers which keys were consumed so leftovers can be rejected.
        class Fields
        {
        public:
            Fields(const json &doc, std::string path) : doc_(doc), path_(std::move(path))
            {
                if (!doc_.is_object())
                    throw ConfigError(where() + ": expected an object");
            }

            std::string at(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

            const json *find(const std::string &key)
            {
                seen_.insert(key);
                auto it = doc_.find(key);
                return it == doc_.end() ? nullptr : &*it;
            }

            void read(const std::string &key, int &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_number_integer())
                        throw ConfigError(at(key) + ": expected an integer");
                    const auto x = v->get<long long>();
                    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                        throw ConfigError(at(key) + ": integer out of range");
                    out = static_cast<int>(x);
                }
            }

            void read(const std::string &key, std::uint64_t &out)
            {
                if (const json *v = find(key))
                {
                    if (v->is_number_unsigned())
                        out = v->get<std::uint64_t>();
                    else if (v->is_number_integer() && v->get<long long>() >= 0)
                        out = static_cast<std::uint64_t>(v->get<long long>());
                    else
                        throw ConfigError(at(key) + ": expected a non-negative integer");
                }
            }

            void read(const std::string &key, double &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_number())
                        throw ConfigError(at(key) + ": expected a number");
                    out = v->get<double>();
                }
            }

            void read(const std::string &key, std::string &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_string())
                        throw ConfigError(at(key) + ": expected a string");
                    out = v->get<std::string>();
                }
            }

            void read(const std::string &key, Interval &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
                        throw ConfigError(at(key) + ": expected [lo, hi]");
                    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
                }
            }

            void finish() const
            {
                for (const auto &item : doc_.items())
                    if (!seen_.count(item.key()))
                        throw ConfigError(at(item.key()) + ": unknown key");
            }

            std::string where() const { return path_.empty() ? "<root>" : path_; }

        private:
            const json &doc_;
            std::string path_;
            std::set<std::string> seen_;
        };

        // Runs `fn`, rewrapping std::invalid_argument from domain validation as ConfigError.
        template <typename Fn>
        void validated(Fn &&fn)
        {
            try
            {
                fn();
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(e.what());
            }
        }

        json interval_json(const Interval &i) { return json::array({i.lo, i.hi}); }

        json geometry_json(const ArrayGeometry &g)
        {
            return {{"num_elements", g.num_elements()}, {"spacing", g.spacing()}, {"wavelength", g.wavelength()}};
        }

        ArrayGeometry geometry_from(const json &doc, const std::string &path)
        {
            Fields f(doc, path);
            int m = 16;
            double spacing = 0.5, wavelength = 1.0;
            f.read("num_elements", m);
            f.read("spacing", spacing);
            f.read("wavelength", wavelength);
            f.finish();
            try
            {
                return ArrayGeometry(m, spacing, wavelength);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(path + ": " + e.what());
            }
        }

        std::string init_scheme_name(InitScheme s)
        {
            switch (s)
            {
            case InitScheme::Random:
                return "random";
            case InitScheme::MultiStart:
                return "multi-start";
            default:
                return "mrt-equal-power";
            }
        }

        json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

        double from_nullable(const json &v, double fallback)
        {
            return v.is_null() ? fallback : v.get<double>();
        }
    }

    json to_json(const Scenario &s)
    {
        json users = json::array();
        for (const auto &paths : s.users)
        {
            json list = json::array();
            for (const auto &p : paths)
                list.push_back({{"gain_re", p.gain.real()}, {"gain_im", p.gain.imag()}, {"angle_rad", p.nominal_angle}});
            users.push_back(std::move(list));
        }
        return {{"tx_geometry", geometry_json(s.tx_geometry)},
                {"rx_geometry", geometry_json(s.rx_geometry)},
                {"users", std::move(users)},
                {"noise_powers", s.noise_powers},
                {"target", {{"angle_rad", s.target.nominal_angle}, {"sensing_snr", s.target.sensing_snr}}},
                {"snapshots", s.snapshots},
                {"power_budget", s.power_budget},
                {"rotation_region", interval_json(s.rotation_region)}};
    }

    Scenario scenario_from_json(const json &doc)
    {
        Scenario s;
        Fields f(doc, "scenario");
        if (const json *g = f.find("tx_geometry"))
            s.tx_geometry = geometry_from(*g, "scenario.tx_geometry");
        if (const json *g = f.find("rx_geometry"))
            s.rx_geometry = geometry_from(*g, "scenario.rx_geometry");
        if (const json *users = f.find("users"))
        {
            if (!users->is_array())
                throw ConfigError("scenario.users: expected an array");
            for (std::size_t k = 0; k < users->size(); ++k)
            {
                const std::string upath = "scenario.users[" + std::to_string(k) + "]";
                if (!(*users)[k].is_array())
                    throw ConfigError(upath + ": expected an array of paths");
                std::vector<PathComponent> paths;
                for (std::size_t l = 0; l < (*users)[k].size(); ++l)
                {
                    Fields p((*users)[k][l], upath + "[" + std::to_string(l) + "]");
                    double re = 0.0, im = 0.0, angle = 0.0;
                    p.read("gain_re", re);
                    p.read("gain_im", im);
                    p.read("angle_rad", angle);
                    p.finish();
                    paths.push_back({cplx(re, im), angle});
                }
                s.users.push_back(std::move(paths));
            }
        }
        if (const json *noise = f.find("noise_powers"))
        {
            if (!noise->is_array())
                throw ConfigError("scenario.noise_powers: expected an array");
            s.noise_powers.clear();
            for (const auto &v : *noise)
            {
                if (!v.is_number())
                    throw ConfigError("scenario.noise_powers: expected numbers");
                s.noise_powers.push_back(v.get<double>());
            }
        }
        if (const json *t = f.find("target"))
        {
            Fields tf(*t, "scenario.target");
            tf.read("angle_rad", s.target.nominal_angle);
            tf.read("sensing_snr", s.target.sensing_snr);
            tf.finish();
        }
        f.read("snapshots", s.snapshots);
        f.read("power_budget", s.power_budget);
        f.read("rotation_region", s.rotation_region);
        f.finish();
        validated([&] { s.validate(); });
        return s;
    }

    json to_json(const ScenarioDistribution &d)
    {
        return {{"num_users", d.num_users},
                {"num_nlos_paths", d.num_nlos_paths},
                {"tx_elements", d.tx_elements},
                {"rx_elements", d.rx_elements},
                {"spacing", d.spacing},
                {"wavelength", d.wavelength},
                {"snapshots", d.snapshots},
                {"power_budget", d.power_budget},
                {"noise_power", d.noise_power},
                {"target_angle_range", interval_json(d.target_angle_range)},
                {"path_angle_range", interval_json(d.path_angle_range)},
                {"path_gain_db", d.path_gain_db},
                {"sensing_snr_db", d.sensing_snr_db},
                {"rotation_region", interval_json(d.rotation_region)}};
    }

    ScenarioDistribution distribution_from_json(const json &doc, const std::string &path)
    {
        ScenarioDistribution d;
        Fields f(doc, path);
        f.read("num_users", d.num_users);
        f.read("num_nlos_paths", d.num_nlos_paths);
        f.read("tx_elements", d.tx_elements);
        f.read("rx_elements", d.rx_elements);
        f.read("spacing", d.spacing);
        f.read("wavelength", d.wavelength);
        f.read("snapshots", d.snapshots);
        f.read("power_budget", d.power_budget);
        f.read("noise_power", d.noise_power);
        f.read("target_angle_range", d.target_angle_range);
        f.read("path_angle_range", d.path_angle_range);
        f.read("path_gain_db", d.path_gain_db);
        f.read("sensing_snr_db", d.sensing_snr_db);
        f.read("rotation_region", d.rotation_region);
        f.finish();
        validated([&] { d.validate(); });
        return d;
    }

    json to_json(const SolverOptions &o)
    {
        return {{"max_bcd_iters", o.max_bcd_iters},
                {"rel_tolerance", o.rel_tolerance},
                {"mu_tolerance", o.mu_tolerance},
                {"mu_max_iters", o.mu_max_iters},
                {"init_scheme", init_scheme_name(o.init_scheme)},
                {"init_seed", o.init_seed}};
    }

    SolverOptions options_from_json(const json &doc, const std::string &path)
    {
        SolverOptions o;
        Fields f(doc, path);
        f.read("max_bcd_iters", o.max_bcd_iters);
        f.read("rel_tolerance", o.rel_tolerance);
        f.read("mu_tolerance", o.mu_tolerance);
        f.read("mu_max_iters", o.mu_max_iters);
        std::string init = init_scheme_name(o.init_scheme);
        f.read("init_scheme", init);
        if (init == "mrt-equal-power")
            o.init_scheme = InitScheme::MrtEqualPower;
        else if (init == "random")
            o.init_scheme = InitScheme::Random;
        else if (init == "multi-start")
            o.init_scheme = InitScheme::MultiStart;
        else
            throw ConfigError(f.at("init_scheme") + ": expected \"multi-start\", \"mrt-equal-power\" or \"random\"");
        f.read("init_seed", o.init_seed);
        f.finish();
        validated([&] { o.validate(); });
        return o;
    }

    json to_json(const ExperimentConfig &c)
    {
        json schemes = json::array();
        for (Scheme s : c.schemes)
            schemes.push_back(std::string(scheme_name(s)));
        json weights = json::array();
        for (const auto &w : c.weight_grid)
            weights.push_back({{"comm_weight", w.comm_weight}, {"sense_weight", w.sense_weight}});
        return {{"distribution", to_json(c.distribution)},
                {"schemes", std::move(schemes)},
                {"weight_grid", std::move(weights)},
                {"monte_carlo_runs", c.monte_carlo_runs},
                {"seed", c.seed},
                {"grid_points", c.grid_points},
                {"output_path", c.output_path},
                {"options", to_json(c.options)},
                {"workers", c.workers},
                {"omega1", c.omega1},
                {"pattern_users", c.pattern_users},
                {"pattern_nlos_paths", c.pattern_nlos_paths},
                {"pattern_points", c.pattern_points}};
    }

    ExperimentConfig config_from_json(const json &doc)
    {
        ExperimentConfig c;
        Fields f(doc, "");
        if (const json *d = f.find("distribution"))
            c.distribution = distribution_from_json(*d, "distribution");
        if (const json *s = f.find("schemes"))
        {
            if (!s->is_array())
                throw ConfigError("schemes: expected an array of scheme names");
            c.schemes.clear();
            for (std::size_t i = 0; i < s->size(); ++i)
            {
                const auto &v = (*s)[i];
                if (!v.is_string())
                    throw ConfigError("schemes[" + std::to_string(i) + "]: expected a string");
                try
                {
                    c.schemes.push_back(parse_scheme(v.get<std::string>()));
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError("schemes[" + std::to_string(i) + "]: " + e.what());
                }
            }
        }
        if (const json *w = f.find("weight_grid"))
        {
            if (!w->is_array())
                throw ConfigError("weight_grid: expected an array");
            c.weight_grid.clear();
            for (std::size_t i = 0; i < w->size(); ++i)
            {
                const std::string path = "weight_grid[" + std::to_string(i) + "]";
                Fields wf((*w)[i], path);
                WeightPair pair{};
                pair.comm_weight = std::numeric_limits<double>::quiet_NaN();
                pair.sense_weight = std::numeric_limits<double>::quiet_NaN();
                wf.read("comm_weight", pair.comm_weight);
                wf.read("sense_weight", pair.sense_weight);
                wf.finish();
                if (std::isnan(pair.comm_weight) && std::isnan(pair.sense_weight))
                    throw ConfigError(path + ": comm_weight or sense_weight required");
                if (std::isnan(pair.sense_weight))
                    pair.sense_weight = 1.0 - pair.comm_weight;
                if (std::isnan(pair.comm_weight))
                    pair.comm_weight = 1.0 - pair.sense_weight;
                try
                {
                    pair.validate();
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError(path + ": " + e.what());
                }
                c.weight_grid.push_back(pair);
            }
        }
        f.read("monte_carlo_runs", c.monte_carlo_runs);
        f.read("seed", c.seed);
        f.read("grid_points", c.grid_points);
        f.read("output_path", c.output_path);
        if (const json *o = f.find("options"))
            c.options = options_from_json(*o, "options");
        f.read("workers", c.workers);
        f.read("omega1", c.omega1);
        f.read("pattern_users", c.pattern_users);
        f.read("pattern_nlos_paths", c.pattern_nlos_paths);
        f.read("pattern_points", c.pattern_points);
        f.finish();
        c.validate();
        return c;
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file: " + path);
        json doc;
        try
        {
            doc = json::parse(in);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(path + ": malformed JSON: " + e.what());
        }
        return config_from_json(doc);
    }

    json to_json(const BeamformingSolution &solution)
    {
        json beams = json::array();
        for (const auto &w : solution.beams())
        {
            json re = json::array(), im = json::array();
            for (Eigen::Index i = 0; i < w.size(); ++i)
            {
                re.push_back(w[i].real());
                im.push_back(w[i].imag());
            }
            beams.push_back({{"re", std::move(re)}, {"im", std::move(im)}});
        }
        return {{"beams", std::move(beams)}, {"total_power", solution.total_power()}};
    }

    json to_json(const RealizationRecord &r)
    {
        return {{"realization", r.realization},
                {"seed", r.seed},
                {"scheme", std::string(scheme_name(r.scheme))},
                {"omega1", r.comm_weight},
                {"sum_rate_bps_hz", r.sum_rate},
                {"crb_rad2", nullable(r.crb)},
                {"degenerate", r.degenerate},
                {"phi_rad", r.rotation},
                {"objective", r.objective},
                {"converged", r.converged}};
    }

    RealizationRecord realization_record_from_json(const json &doc)
    {
        RealizationRecord r;
        r.realization = doc.at("realization").get<int>();
        r.seed = doc.at("seed").get<std::uint64_t>();
        r.scheme = parse_scheme(doc.at("scheme").get<std::string>());
        r.comm_weight = doc.at("omega1").get<double>();
        r.sum_rate = doc.at("sum_rate_bps_hz").get<double>();
        r.crb = from_nullable(doc.at("crb_rad2"), std::numeric_limits<double>::infinity());
        r.degenerate = doc.at("degenerate").get<bool>();
        r.rotation = doc.at("phi_rad").get<double>();
        r.objective = doc.at("objective").get<double>();
        r.converged = doc.at("converged").get<bool>();
        return r;
    }

    json to_json(const TradeoffRecord &r)
    {
        return {{"scheme", std::string(scheme_name(r.scheme))},
                {"omega1", r.comm_weight},
                {"mean_sum_rate_bps_hz", r.mean_sum_rate},
                {"mean_crb_rad2", nullable(r.mean_crb)},
                {"mean_log10_crb", nullable(r.mean_log10_crb)},
                {"mean_phi_rad", r.mean_rotation},
                {"runs", r.runs},
                {"degenerate", r.degenerate}};
    }

    TradeoffRecord tradeoff_record_from_json(const json &doc)
    {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        TradeoffRecord r;
        r.scheme = parse_scheme(doc.at("scheme").get<std::string>());
        r.comm_weight = doc.at("omega1").get<double>();
        r.mean_sum_rate = doc.at("mean_sum_rate_bps_hz").get<double>();
        r.mean_crb = from_nullable(doc.at("mean_crb_rad2"), nan);
        r.mean_log10_crb = from_nullable(doc.at("mean_log10_crb"), nan);
        r.mean_rotation = doc.at("mean_phi_rad").get<double>();
        r.runs = doc.at("runs").get<int>();
        r.degenerate = doc.at("degenerate").get<int>();
        return r;
    }

    json tradeoff_document(const ExperimentConfig &config, const TradeoffResult &result, const json &provenance)
    {
        json records = json::array();
        for (const auto &r : result.records)
            records.push_back(to_json(r));
        json realizations = json::array();
        for (const auto &r : result.realizations)
            realizations.push_back(to_json(r));
        return {{"config", to_json(config)},
                {"provenance", provenance},
                {"records", std::move(records)},
                {"realizations", std::move(realizations)}};
    }

    void write_text_file(const std::string &path, const std::string &text)
    {
        const std::filesystem::path p(path);
        if (p.has_parent_path())
        {
            std::error_code ec;
            std::filesystem::create_directories(p.parent_path(), ec);
            if (ec)
                throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
        }
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open output file: " + path);
        out << text;
        if (!out)
            throw IoError("write failed: " + path);
    }

    std::string read_text_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::string sidecar_path(const std::string &csv_path)
    {
        std::filesystem::path p(csv_path);
        p.replace_extension(".json");
        return p.string();
    }
}
