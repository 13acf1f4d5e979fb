"""Reference values produced by tools/oracles/freeze.py. Do not edit by hand."""

FIXTURES = {'bump3d': {'schemaVersion': 1,
            'mode': 'radial3d',
            'd': 3,
            'L': 12.0,
            'N': 2048,
            'm': 1.0,
            'components': [{'kind': 'bump', 'radius': 0.8, 'amplitude': 1.0, 'target': 'f'},
                           {'kind': 'bump', 'radius': 0.8, 'amplitude': 0.5, 'target': 'g'}]},
 'straddle': {'schemaVersion': 1,
              'mode': 'radial3d',
              'd': 3,
              'L': 12.0,
              'N': 4096,
              'm': 1.0,
              'components': [{'kind': 'gaussian-mollified-bump',
                              'radius': 1.4,
                              'amplitude': 1.0,
                              'target': 'f'},
                             {'kind': 'gaussian-mollified-bump',
                              'radius': 1.2,
                              'amplitude': -0.7,
                              'target': 'g'}]},
 'massless': {'schemaVersion': 1,
              'mode': 'radial3d',
              'd': 3,
              'L': 12.0,
              'N': 2048,
              'm': 0.0,
              'components': [{'kind': 'bump', 'radius': 0.9, 'amplitude': 1.0, 'target': 'f'},
                             {'kind': 'bump', 'radius': 0.7, 'amplitude': 0.8, 'target': 'g'}]},
 'pair_a': {'schemaVersion': 1,
            'mode': 'radial3d',
            'd': 3,
            'L': 16.0,
            'N': 4096,
            'm': 1.0,
            'components': [{'kind': 'gaussian-mollified-bump',
                            'radius': 1.0,
                            'amplitude': 1.0,
                            'target': 'f'},
                           {'kind': 'gaussian-mollified-bump',
                            'radius': 0.7,
                            'amplitude': 0.4,
                            'target': 'g'}]},
 'pair_b': {'schemaVersion': 1,
            'mode': 'radial3d',
            'd': 3,
            'L': 16.0,
            'N': 4096,
            'm': 1.0,
            'components': [{'kind': 'gaussian-mollified-bump',
                            'radius': 0.8,
                            'amplitude': -0.6,
                            'target': 'f'},
                           {'kind': 'gaussian-mollified-bump',
                            'radius': 1.1,
                            'amplitude': 1.0,
                            'target': 'g'}]},
 'transport': {'schemaVersion': 1,
               'mode': 'radial3d',
               'd': 3,
               'L': 12.0,
               'N': 2048,
               'm': 0.0,
               'components': [{'kind': 'bump', 'radius': 0.8, 'amplitude': 1.0, 'target': 'f'},
                              {'kind': 'bump', 'radius': 0.6, 'amplitude': 0.7, 'target': 'g'}]}}

BESSEL = {'K0': [[1e-06, 13.93144207362642],
        [0.001, 7.023688800562382],
        [0.1, 2.4270690247020164],
        [0.5, 0.9244190712276659],
        [1.0, 0.42102443824070834],
        [2.0, 0.11389387274953344],
        [2.5, 0.06234755320036619],
        [5.0, 0.0036910983340425942],
        [10.0, 1.778006231616765e-05],
        [24.0, 9.608818780833116e-12],
        [26.0, 1.2498773979850725e-12],
        [50.0, 3.4101677497894956e-23],
        [200.0, 1.2256819797765334e-88],
        [700.0, 4.669776431685377e-306]],
 'K_half': [[0.001, 39.59365951311664],
            [0.3, 1.6951610563392832],
            [1.0, 0.46106850444789454],
            [4.0, 0.011477624576608053],
            [20.0, 5.776373974707445e-10]],
 'yukawa_m1_r1': 0.02927491576215958,
 'green2d_m1p5_r0p4': 0.1237464842897886}

DENSE_MODULAR = {'C2_basis': [[1.0288568739519013, 1.6419200406711503],
              [1.1467195295966137, -0.9731795154745656],
              [-1.3928000963768683, 0.06719635507109722],
              [0.8613509179404263, 0.509186798845688]],
 'C2_log_eigenvalues': [-2.6571698078012025, 2.6571698078012025],
 'C4_basis': [[-0.39530128858657, 0.2639148850157296, 0.6071282687955677, -0.9721597997272025],
              [0.7676642531398922, 0.25505812177433956, 0.7829798706300901, 0.27241823407236765],
              [1.1620081255305676, -0.9377563787668719, 1.776099733817743, 1.2023898441352874],
              [-0.5999578484570015, 0.6601663130603562, 0.44476738448754977, -1.7457635656172505],
              [0.5952162456256633, -0.5853991209052885, -0.25001353358513434, -0.6023864391110364],
              [-0.4280840067640782, 0.07173470176248886, 0.09671912405619901, -1.5591518413922796],
              [-0.26870603364939344, -1.3448111474077982, -1.2707778590591046, -0.346953600730839],
              [0.85530027587691, 0.6308565040330028, -0.6046580474158655, -0.7104208239983351]],
 'C4_vector': [-0.8274098970826956,
               0.14274021925565974,
               0.936650038779724,
               0.01804985703847165,
               0.6927666696591163,
               0.3154090546513482,
               1.5041856647552274,
               -2.0066907365561706],
 'C4_entropy': 13.221946430056722,
 'C4_log_eigenvalues': [-3.283998843714107, -1.3935529915534284, 1.3935529915534284, 3.283998843714107]}

QUADRATURE = {'bump3d_R1': {'stress': 7.8456866665522105,
               'norm': 1.1422059854389692,
               'yukawa': 0.05966483341097041,
               'energy': 3.7214604913311273},
 'bump3d_R2': {'stress': 21.459812743561905,
               'norm': 0.5711029927194846,
               'yukawa': 0.029832416705485205,
               'energy': 3.7214604913311273},
 'straddle_R1': {'stress': 4.179974740623423,
                 'norm': 2.5170216950438586,
                 'yukawa': 0.230155318070638,
                 'energy': 2.800201530901543},
 'massless_form_R1': 1.413787013209054,
 'beta_f1_g2': -0.15806088219284434,
 'pairs_m1': {'re_ab': -0.220416866319677,
              're_aa': 0.5320156405987889,
              'sobolev_plus_half_fA': 1.060144865154919,
              'sobolev_minus_half_fA': 0.09623762266734627,
              'mu_f_pairA': [[0.0, 4.187025994700088],
                             [0.3, 3.025370391072582],
                             [0.6, 0.8060712920242442],
                             [1.0, -0.14683919454271716],
                             [2.0, -0.002651204259134111]]},
 'green_conv_bump08_m1': [[0.0, 0.0895750194500359],
                          [0.3, 0.07651300453718723],
                          [1.0, 0.018622945550385864],
                          [2.5, 0.001662136329237234]]}

TRANSPORT = [[0.5, 0.1, -0.5572607136937476],
 [0.5, 0.5, 0.05086023234727754],
 [0.5, 1.0, 0.13208734825747845],
 [0.5, 1.7, 0.0],
 [0.5, 3.9, 0.0],
 [0.5, 4.3, 0.0],
 [1.5, 0.1, 0.0],
 [1.5, 0.5, 0.0],
 [1.5, 1.0, -0.13128859601527934],
 [1.5, 1.7, 0.06610852617180317],
 [1.5, 3.9, 0.0],
 [1.5, 4.3, 0.0],
 [4.0, 0.1, 0.0],
 [4.0, 0.5, 0.0],
 [4.0, 1.0, 0.0],
 [4.0, 1.7, 0.0],
 [4.0, 3.9, -0.006540504228952483],
 [4.0, 4.3, 0.03236737749018297]]
