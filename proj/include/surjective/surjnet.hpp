#ifndef SURJECTIVE_SURJNET_HPP
#define SURJECTIVE_SURJNET_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "random.hpp"

namespace surjective {

/// A 3 x w integer matrix with each column standardized over its three
/// entries (population std). Constant columns become zero.
struct ScaledSample {
    Eigen::MatrixXd matrix;
    std::vector<double> mean, scale;
};

inline ScaledSample scale_features(const std::array<std::vector<std::uint64_t>, 3>& triple) {
    const auto w = static_cast<Eigen::Index>(triple[0].size());
    ScaledSample s{Eigen::MatrixXd(3, w), std::vector<double>(static_cast<std::size_t>(w)),
                   std::vector<double>(static_cast<std::size_t>(w))};
    for (Eigen::Index j = 0; j < w; ++j) {
        double col[3];
        for (std::size_t i = 0; i < 3; ++i) {
            if (triple[i].size() != static_cast<std::size_t>(w)) throw std::invalid_argument("ragged triple");
            col[i] = static_cast<double>(triple[i][static_cast<std::size_t>(j)]);
        }
        const double mean = (col[0] + col[1] + col[2]) / 3.0;
        double var = 0;
        for (double c : col) var += (c - mean) * (c - mean);
        var /= 3.0;
        const double scale = var < 1e-12 ? 1.0 : std::sqrt(var);
        for (Eigen::Index i = 0; i < 3; ++i) s.matrix(i, j) = (col[i] - mean) / scale;
        s.mean[static_cast<std::size_t>(j)] = mean;
        s.scale[static_cast<std::size_t>(j)] = scale;
    }
    return s;
}

struct TrainConfig {
    int epochs = 150;
    int batch_size = 32;
    double test_fraction = 0.2;
    std::uint64_t seed = 42;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
    int filters = 256;
    int hidden = 256;

    void validate() const {
        if (epochs <= 0 || batch_size <= 0 || filters <= 0 || hidden <= 0 || learning_rate <= 0 || epsilon <= 0)
            throw std::invalid_argument("training parameters must be positive");
        if (!(test_fraction > 0 && test_fraction < 1)) throw std::invalid_argument("test fraction must lie in (0, 1)");
        if (!(beta1 > 0 && beta1 < 1 && beta2 > 0 && beta2 < 1)) throw std::invalid_argument("Adam betas must lie in (0, 1)");
    }
};

/// Standardization of the targets, fit on the training part only.
struct TargetScaler {
    double mean = 0.0;
    double scale = 1.0;

    static TargetScaler fit(const std::vector<double>& y) {
        if (y.empty()) throw std::invalid_argument("cannot fit a scaler on no data");
        double m = 0;
        for (double v : y) m += v;
        m /= static_cast<double>(y.size());
        double var = 0;
        for (double v : y) var += (v - m) * (v - m);
        var /= static_cast<double>(y.size());
        return {m, var < 1e-12 ? 1.0 : std::sqrt(var)};
    }
    double transform(double y) const { return (y - mean) / scale; }
    double inverse(double z) const { return z * scale + mean; }
};

struct Split {
    std::vector<DatasetRecord> train, test;
};

/// Shuffles with the given generator and puts the last ceil(fraction * N)
/// records into the test part.
inline Split split(const std::vector<DatasetRecord>& records, double test_fraction, Rng& rng) {
    if (records.size() < 5) throw std::invalid_argument("need at least 5 records to split");
    std::vector<std::size_t> idx(records.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    shuffle(idx, rng);
    const auto n_test = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(records.size())));
    Split s;
    for (std::size_t i = 0; i < idx.size(); ++i)
        (i + n_test < idx.size() ? s.train : s.test).push_back(records[idx[i]]);
    return s;
}

inline Split split(const std::vector<DatasetRecord>& records, const TrainConfig& cfg) {
    Rng rng(cfg.seed);
    return split(records, cfg.test_fraction, rng);
}

/// Conv(2x2, valid) -> ReLU -> flatten (row, column, channel) -> dense ->
/// ReLU -> dense(1). Kernel entries are ordered (0,0), (0,1), (1,0), (1,1).
struct Weights {
    Eigen::MatrixXd conv_w;  // filters x 4
    Eigen::VectorXd conv_b;  // filters
    Eigen::MatrixXd w1;      // hidden x (2 (w-1) filters)
    Eigen::VectorXd b1;      // hidden
    Eigen::MatrixXd w2;      // 1 x hidden
    Eigen::VectorXd b2;      // 1

    static Weights zeros(int width, int filters, int hidden) {
        if (width < 2) throw std::invalid_argument("input width must be at least 2");
        const int flat = 2 * (width - 1) * filters;
        return {Eigen::MatrixXd::Zero(filters, 4), Eigen::VectorXd::Zero(filters), Eigen::MatrixXd::Zero(hidden, flat),
                Eigen::VectorXd::Zero(hidden),      Eigen::MatrixXd::Zero(1, hidden), Eigen::VectorXd::Zero(1)};
    }

    int filters() const { return static_cast<int>(conv_w.rows()); }
    int hidden() const { return static_cast<int>(w1.rows()); }
    int width() const { return static_cast<int>(w1.cols()) / (2 * filters()) + 1; }
    int flat() const { return static_cast<int>(w1.cols()); }

    /// The six parameter blocks in a fixed order.
    std::array<Eigen::Map<Eigen::VectorXd>, 6> blocks() {
        return {Eigen::Map<Eigen::VectorXd>(conv_w.data(), conv_w.size()),
                Eigen::Map<Eigen::VectorXd>(conv_b.data(), conv_b.size()),
                Eigen::Map<Eigen::VectorXd>(w1.data(), w1.size()),
                Eigen::Map<Eigen::VectorXd>(b1.data(), b1.size()),
                Eigen::Map<Eigen::VectorXd>(w2.data(), w2.size()),
                Eigen::Map<Eigen::VectorXd>(b2.data(), b2.size())};
    }

    friend bool operator==(const Weights& a, const Weights& b) {
        return a.conv_w == b.conv_w && a.conv_b == b.conv_b && a.w1 == b.w1 && a.b1 == b.b1 && a.w2 == b.w2 &&
               a.b2 == b.b2;
    }
};

struct AdamState {
    Weights m, v;
    std::uint64_t step = 0;
};

struct NetworkParams {
    Weights weights;
    AdamState adam;
};

/// Glorot-uniform kernels, zero biases.
inline NetworkParams init_params(int width, int filters, int hidden, Rng& rng) {
    NetworkParams p{Weights::zeros(width, filters, hidden),
                    {Weights::zeros(width, filters, hidden), Weights::zeros(width, filters, hidden), 0}};
    auto glorot = [&](Eigen::MatrixXd& m, double fan_in, double fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = uniform_real(rng, -limit, limit);
    };
    glorot(p.weights.conv_w, 4.0, 4.0 * filters);
    glorot(p.weights.w1, p.weights.flat(), hidden);
    glorot(p.weights.w2, hidden, 1.0);
    return p;
}

/// Samples as columns: entry r * w + c of a column is row r, column c of the
/// scaled 3 x w matrix.
struct Batch {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd targets;
};

inline Eigen::VectorXd flatten_sample(const Eigen::MatrixXd& m) {
    Eigen::VectorXd v(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
    return v;
}

namespace surjnet_detail {

/// 4 x (positions * B) patch matrix; column b * positions + (i (w-1) + j).
inline Eigen::MatrixXd patches(const Eigen::MatrixXd& inputs, int width) {
    if (inputs.rows() != 3 * width) throw std::invalid_argument("input has the wrong shape for this network");
    const int npos = 2 * (width - 1);
    const auto B = inputs.cols();
    Eigen::MatrixXd P(4, npos * B);
    for (Eigen::Index b = 0; b < B; ++b)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < width - 1; ++j) {
                const Eigen::Index col = b * npos + i * (width - 1) + j;
                P(0, col) = inputs(i * width + j, b);
                P(1, col) = inputs(i * width + j + 1, b);
                P(2, col) = inputs((i + 1) * width + j, b);
                P(3, col) = inputs((i + 1) * width + j + 1, b);
            }
    return P;
}

struct Activations {
    Eigen::MatrixXd P, conv_pre, flat, h_pre, h;
    Eigen::RowVectorXd out;
};

inline Activations run(const Weights& w, const Eigen::MatrixXd& inputs) {
    Activations a;
    const int width = w.width();
    a.P = patches(inputs, width);
    a.conv_pre = (w.conv_w * a.P).colwise() + w.conv_b;
    // Columns of conv_pre for one sample, stacked, are its flattened
    // (row, column, channel) activation vector.
    const Eigen::MatrixXd relu = a.conv_pre.cwiseMax(0.0);
    a.flat = Eigen::Map<const Eigen::MatrixXd>(relu.data(), w.flat(), inputs.cols());
    a.h_pre = (w.w1 * a.flat).colwise() + w.b1;
    a.h = a.h_pre.cwiseMax(0.0);
    a.out = (w.w2 * a.h).array() + w.b2(0);
    return a;
}

}  // namespace surjnet_detail

/// Network output on one scaled 3 x w sample.
inline double forward(const Weights& w, const Eigen::MatrixXd& sample) {
    if (sample.rows() != 3 || sample.cols() != w.width()) throw std::invalid_argument("sample shape mismatch");
    return surjnet_detail::run(w, flatten_sample(sample)).out(0);
}

struct LossAndGrad {
    double loss;
    Weights grad;
};

/// Batch-mean squared error and its exact gradient (ReLU'(0) = 0).
inline LossAndGrad loss_and_grad(const Weights& w, const Batch& batch) {
    using namespace surjnet_detail;
    const auto B = batch.inputs.cols();
    if (B == 0) throw std::invalid_argument("empty batch");
    const Activations a = run(w, batch.inputs);
    const Eigen::RowVectorXd resid = a.out - batch.targets.transpose();
    LossAndGrad r{resid.squaredNorm() / static_cast<double>(B), Weights{}};
    Weights& g = r.grad;

    const Eigen::RowVectorXd d_out = resid * (2.0 / static_cast<double>(B));
    g.w2 = d_out * a.h.transpose();
    g.b2 = Eigen::VectorXd::Constant(1, d_out.sum());
    const Eigen::MatrixXd d_h = ((w.w2.transpose() * d_out).array() * (a.h_pre.array() > 0.0).cast<double>()).matrix();
    g.w1 = d_h * a.flat.transpose();
    g.b1 = d_h.rowwise().sum();
    Eigen::MatrixXd d_flat = w.w1.transpose() * d_h;
    const Eigen::Map<Eigen::MatrixXd> d_conv(d_flat.data(), w.filters(), a.conv_pre.cols());
    const Eigen::MatrixXd d_pre = (d_conv.array() * (a.conv_pre.array() > 0.0).cast<double>()).matrix();
    g.conv_w = d_pre * a.P.transpose();
    g.conv_b = d_pre.rowwise().sum();
    return r;
}

inline void adam_step(NetworkParams& p, Weights& grad, const TrainConfig& cfg) {
    ++p.adam.step;
    const double t = static_cast<double>(p.adam.step);
    const double lr_t = cfg.learning_rate * std::sqrt(1.0 - std::pow(cfg.beta2, t)) / (1.0 - std::pow(cfg.beta1, t));
    auto W = p.weights.blocks();
    auto M = p.adam.m.blocks();
    auto V = p.adam.v.blocks();
    auto G = grad.blocks();
    for (std::size_t k = 0; k < W.size(); ++k) {
        M[k] = cfg.beta1 * M[k] + (1.0 - cfg.beta1) * G[k];
        V[k] = cfg.beta2 * V[k] + (1.0 - cfg.beta2) * G[k].cwiseProduct(G[k]);
        W[k].array() -= lr_t * M[k].array() / (V[k].array().sqrt() + cfg.epsilon);
    }
}

struct Model {
    NetworkParams params;
    TargetScaler scaler;
    TrainConfig config;
};

inline Batch make_batch(const std::vector<DatasetRecord>& records, const std::vector<std::size_t>& idx,
                        std::size_t begin, std::size_t end, const TargetScaler& scaler) {
    const auto width = static_cast<Eigen::Index>(records[idx[begin]].vut[0].size());
    Batch b{Eigen::MatrixXd(3 * width, static_cast<Eigen::Index>(end - begin)),
            Eigen::VectorXd(static_cast<Eigen::Index>(end - begin))};
    for (std::size_t k = begin; k < end; ++k) {
        const auto& r = records[idx[k]];
        b.inputs.col(static_cast<Eigen::Index>(k - begin)) = flatten_sample(scale_features(r.vut).matrix);
        b.targets(static_cast<Eigen::Index>(k - begin)) = scaler.transform(r.label);
    }
    return b;
}

struct TrainResult {
    Model model;
    Split data;
    std::vector<double> history;  // per-epoch mean training loss
};

/// One generator seeded with cfg.seed drives, in order: the split, the
/// weight initialization, and the per-epoch reshuffles.
inline TrainResult train(const std::vector<DatasetRecord>& records, const TrainConfig& cfg,
                         const std::function<void(int, double)>& on_epoch = {}) {
    cfg.validate();
    if (records.empty()) throw std::invalid_argument("no training records");
    const auto width = static_cast<int>(records.front().vut[0].size());
    for (const auto& r : records)
        if (static_cast<int>(r.vut[0].size()) != width) throw std::invalid_argument("records of different widths");
    Rng rng(cfg.seed);
    TrainResult res;
    res.data = split(records, cfg.test_fraction, rng);
    std::vector<double> y;
    for (const auto& r : res.data.train) y.push_back(r.label);
    res.model.scaler = TargetScaler::fit(y);
    res.model.config = cfg;
    res.model.params = init_params(width, cfg.filters, cfg.hidden, rng);

    const auto& train_set = res.data.train;
    std::vector<std::size_t> idx(train_set.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const auto bs = static_cast<std::size_t>(cfg.batch_size);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle(idx, rng);
        double total = 0;
        for (std::size_t begin = 0; begin < idx.size(); begin += bs) {
            const std::size_t end = std::min(begin + bs, idx.size());
            const Batch batch = make_batch(train_set, idx, begin, end, res.model.scaler);
            LossAndGrad lg = loss_and_grad(res.model.params.weights, batch);
            total += lg.loss * static_cast<double>(end - begin);
            adam_step(res.model.params, lg.grad, cfg);
        }
        const double mse = total / static_cast<double>(idx.size());
        res.history.push_back(mse);
        if (on_epoch) on_epoch(epoch, mse);
    }
    return res;
}

namespace surjnet_detail {

inline Eigen::RowVectorXd outputs(const Model& m, const std::vector<DatasetRecord>& records) {
    std::vector<std::size_t> idx(records.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return run(m.params.weights, make_batch(records, idx, 0, idx.size(), m.scaler).inputs).out;
}

}  // namespace surjnet_detail

/// Mean squared error on standardized targets.
inline double evaluate(const Model& m, const std::vector<DatasetRecord>& records) {
    if (records.empty()) throw std::invalid_argument("no records to evaluate");
    const Eigen::RowVectorXd out = surjnet_detail::outputs(m, records);
    double s = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double d = out(static_cast<Eigen::Index>(i)) - m.scaler.transform(records[i].label);
        s += d * d;
    }
    return s / static_cast<double>(records.size());
}

/// The measure of surjectivity: the network output mapped back to label scale.
inline double predict(const Model& m, const std::array<std::vector<std::uint64_t>, 3>& triple) {
    if (static_cast<int>(triple[0].size()) != m.params.weights.width())
        throw std::invalid_argument("triple width does not match the model");
    return m.scaler.inverse(forward(m.params.weights, scale_features(triple).matrix));
}

inline double mean_prediction(const Model& m, const std::vector<DatasetRecord>& records) {
    if (records.empty()) throw std::invalid_argument("no records to predict");
    const Eigen::RowVectorXd out = surjnet_detail::outputs(m, records);
    double s = 0;
    for (Eigen::Index i = 0; i < out.size(); ++i) s += m.scaler.inverse(out(i));
    return s / static_cast<double>(out.size());
}

// Checkpoint: a line-oriented text file. Doubles are written as C99 hex
// floats so a save/load round trip is exact.
//   surjnet-checkpoint 1
//   shape <width> <filters> <hidden>
//   config <epochs> <batch> <test_fraction> <seed> <lr> <beta1> <beta2> <eps>
//   scaler <mean> <scale>
//   step <n>
//   <block> <count> <values...>   for weights, adam_m, adam_v blocks

inline constexpr int checkpoint_version = 1;

namespace surjnet_detail {

inline std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

inline double parse_double(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw std::runtime_error("bad number in checkpoint: " + tok);
    return v;
}

inline const std::array<const char*, 6> block_names = {"conv_w", "conv_b", "w1", "b1", "w2", "b2"};

}  // namespace surjnet_detail

inline void save_checkpoint(const Model& m, std::ostream& os) {
    using surjnet_detail::hex;
    const Weights& w = m.params.weights;
    const TrainConfig& c = m.config;
    os << "surjnet-checkpoint " << checkpoint_version << '\n';
    os << "shape " << w.width() << ' ' << w.filters() << ' ' << w.hidden() << '\n';
    os << "config " << c.epochs << ' ' << c.batch_size << ' ' << hex(c.test_fraction) << ' ' << c.seed << ' '
       << hex(c.learning_rate) << ' ' << hex(c.beta1) << ' ' << hex(c.beta2) << ' ' << hex(c.epsilon) << '\n';
    os << "scaler " << hex(m.scaler.mean) << ' ' << hex(m.scaler.scale) << '\n';
    os << "step " << m.params.adam.step << '\n';
    auto dump = [&](const char* prefix, Weights ws) {
        auto blocks = ws.blocks();
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            os << prefix << surjnet_detail::block_names[k] << ' ' << blocks[k].size();
            for (Eigen::Index i = 0; i < blocks[k].size(); ++i) os << ' ' << hex(blocks[k](i));
            os << '\n';
        }
    };
    dump("", w);
    dump("adam_m.", m.params.adam.m);
    dump("adam_v.", m.params.adam.v);
}

inline void save_checkpoint(const Model& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    save_checkpoint(m, os);
    if (!os) throw std::runtime_error("write to " + path + " failed");
}

inline Model load_checkpoint(std::istream& is) {
    using surjnet_detail::parse_double;
    auto expect = [&](const std::string& key) {
        std::string tok;
        if (!(is >> tok) || tok != key) throw std::runtime_error("checkpoint: expected '" + key + "'");
    };
    auto next = [&]() {
        std::string tok;
        if (!(is >> tok)) throw std::runtime_error("checkpoint: unexpected end of file");
        return tok;
    };
    expect("surjnet-checkpoint");
    if (std::stoi(next()) != checkpoint_version) throw std::runtime_error("checkpoint: unsupported version");
    expect("shape");
    const int width = std::stoi(next()), filters = std::stoi(next()), hidden = std::stoi(next());
    Model m;
    expect("config");
    m.config.epochs = std::stoi(next());
    m.config.batch_size = std::stoi(next());
    m.config.test_fraction = parse_double(next());
    m.config.seed = std::stoull(next());
    m.config.learning_rate = parse_double(next());
    m.config.beta1 = parse_double(next());
    m.config.beta2 = parse_double(next());
    m.config.epsilon = parse_double(next());
    m.config.filters = filters;
    m.config.hidden = hidden;
    expect("scaler");
    m.scaler.mean = parse_double(next());
    m.scaler.scale = parse_double(next());
    expect("step");
    m.params.adam.step = std::stoull(next());
    auto read = [&](const std::string& prefix, Weights& ws) {
        ws = Weights::zeros(width, filters, hidden);
        auto blocks = ws.blocks();
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            expect(prefix + surjnet_detail::block_names[k]);
            if (std::stoll(next()) != blocks[k].size()) throw std::runtime_error("checkpoint: block size mismatch");
            for (Eigen::Index i = 0; i < blocks[k].size(); ++i) blocks[k](i) = parse_double(next());
        }
    };
    read("", m.params.weights);
    read("adam_m.", m.params.adam.m);
    read("adam_v.", m.params.adam.v);
    return m;
}

inline Model load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return load_checkpoint(is);
}

inline void write_history_csv(const std::vector<double>& history, std::ostream& os) {
    os << "epoch,train_mse\n";
    char buf[64];
    for (std::size_t i = 0; i < history.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", history[i]);
        os << i + 1 << ',' << buf << '\n';
    }
}

}  // namespace surjective

#endif
