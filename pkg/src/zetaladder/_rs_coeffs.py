"""Taylor coefficients of the Riemann-Siegel terms C0..C4 in z = 2p - 1.

Generated by scripts/gen_rs_coeffs.py; do not edit by hand.
"""

RS_COEFFS = (
    (
        3.8268343236508977173e-1,
        0.0,
        4.3724046807752044936e-1,
        0.0,
        1.3237657548034352332e-1,
        0.0,
        -1.3605026047674188655e-2,
        0.0,
        -1.3567621970103580888e-2,
        0.0,
        -1.6237253231444652829e-3,
        0.0,
        2.9705353733379690783e-4,
        0.0,
        7.943300879521469588e-5,
        0.0,
        4.6556124614504505037e-7,
        0.0,
        -1.4327251630955105754e-6,
        0.0,
        -1.0354847112312946075e-7,
        0.0,
        1.2357927083861738056e-8,
        0.0,
        1.7881083857954904986e-9,
        0.0,
        -3.3914143899270359069e-11,
        0.0,
        -1.6326633902565905101e-11,
        0.0,
        -3.7851093185412203829e-13,
        0.0,
        9.3274232592017248457e-14,
        0.0,
        5.2218430159781368553e-15,
        0.0,
        -3.3506730727442637895e-16,
        0.0,
        -3.4124265228117264941e-17,
        0.0,
        5.7512033414323991603e-19,
        0.0,
        1.4895301363211505455e-19,
        0.0,
        1.2565372717021416853e-21,
        0.0,
        -4.721295250143425669e-22,
    ),
    (
        0.0,
        -2.682510262837534703e-2,
        0.0,
        1.378477342635185305e-2,
        0.0,
        3.8491250482235082229e-2,
        0.0,
        9.871066299062076472e-3,
        0.0,
        -3.3107597608584043329e-3,
        0.0,
        -1.4647808577954150825e-3,
        0.0,
        -1.3207940624876963675e-5,
        0.0,
        5.9227487018471413232e-5,
        0.0,
        5.9802425853734485877e-6,
        0.0,
        -9.6413224561698263527e-7,
        0.0,
        -1.833473372271441176e-7,
        0.0,
        4.4670875627178335996e-9,
        0.0,
        2.7096350821772743217e-9,
        0.0,
        7.7852886543158510463e-11,
        0.0,
        -2.3437626010893688532e-11,
        0.0,
        -1.5830172789987521642e-12,
        0.0,
        1.2119941573723791247e-13,
        0.0,
        1.4583781161108307018e-14,
        0.0,
        -2.8786305258131917505e-16,
        0.0,
        -8.6628629021237241225e-17,
        0.0,
        -8.4307227271370412716e-19,
        0.0,
        3.6308072230973462002e-19,
        0.0,
        1.1626698212838296719e-20,
        0.0,
        -1.0975486711527531816e-21,
    ),
    (
        5.1885428302931684938e-3,
        0.0,
        3.0946583880634746033e-4,
        0.0,
        -1.1335941078229373382e-2,
        0.0,
        2.2330457419581447721e-3,
        0.0,
        5.1966374088623302051e-3,
        0.0,
        3.4399144076208336695e-4,
        0.0,
        -5.9106484274705828217e-4,
        0.0,
        -1.0229972547935857454e-4,
        0.0,
        2.0888392216992755408e-5,
        0.0,
        5.9276654930965359579e-6,
        0.0,
        -1.6423838362436275978e-7,
        0.0,
        -1.5161199700940682862e-7,
        0.0,
        -5.9078036982066679629e-9,
        0.0,
        2.0911514859478188978e-9,
        0.0,
        1.7815649583292351054e-10,
        0.0,
        -1.6164072455353830753e-11,
        0.0,
        -2.3806962496667615707e-12,
        0.0,
        5.3982652955425949182e-14,
        0.0,
        1.9750142196969515273e-14,
        0.0,
        2.3332868732882634831e-16,
        0.0,
        -1.1187517610048080208e-16,
        0.0,
        -4.1640094888837671885e-18,
        0.0,
        4.4460811092918830289e-19,
        0.0,
        2.8546114783637144546e-20,
        0.0,
        -1.1913231430037894305e-21,
        0.0,
        -1.2981634360736498947e-22,
    ),
    (
        0.0,
        -1.3397160907194569043e-3,
        0.0,
        3.7442151363793937047e-3,
        0.0,
        -1.330317891932146812e-3,
        0.0,
        -2.2654660765471787115e-3,
        0.0,
        9.5484999985067304151e-4,
        0.0,
        6.0100384589636039121e-4,
        0.0,
        -1.0128858286776621953e-4,
        0.0,
        -6.8657334492998256425e-5,
        0.0,
        5.9853667915385981593e-7,
        0.0,
        3.331659851239947129e-6,
        0.0,
        2.1919289102435081057e-7,
        0.0,
        -7.8908842456814944106e-8,
        0.0,
        -9.4146850812952621517e-9,
        0.0,
        9.5701162108834803019e-10,
        0.0,
        1.8763137453470662797e-10,
        0.0,
        -4.4378376793233993275e-12,
        0.0,
        -2.2426738505617353248e-12,
        0.0,
        -3.6276868657352436894e-14,
        0.0,
        1.7639809550821581608e-14,
        0.0,
        7.9607652467867777573e-16,
        0.0,
        -9.4196514905896907639e-17,
        0.0,
        -7.1331038545696578246e-18,
        0.0,
        3.2899105845546243212e-19,
        0.0,
        4.1807303748984592914e-20,
        0.0,
        -5.5505420716463337898e-22,
        0.0,
        -1.7870441906260123859e-22,
    ),
    (
        4.6483389361763381854e-4,
        0.0,
        -1.005660736534047076e-3,
        0.0,
        2.4044856573725793022e-4,
        0.0,
        1.0283086149702321878e-3,
        0.0,
        -7.6578610717556441866e-4,
        0.0,
        -2.0365286803084817621e-4,
        0.0,
        2.3212290491068727895e-4,
        0.0,
        3.2602144243865197608e-5,
        0.0,
        -2.557906251794952514e-5,
        0.0,
        -4.107464438915744754e-6,
        0.0,
        1.1781113640371293881e-6,
        0.0,
        2.4456561422484578542e-7,
        0.0,
        -2.391582476734432243e-8,
        0.0,
        -7.5052142070357552885e-9,
        0.0,
        1.3312279416258428193e-10,
        0.0,
        1.3440626754225619719e-10,
        0.0,
        3.5137700424304859287e-12,
        0.0,
        -1.5191544533703919336e-12,
        0.0,
        -8.9154176814470873055e-14,
        0.0,
        1.1195891165228535773e-14,
        0.0,
        1.0516013329914814964e-15,
        0.0,
        -5.1786552736466836615e-17,
        0.0,
        -8.0658748619165660515e-18,
        0.0,
        1.060820453056396595e-19,
        0.0,
        4.4336806742994087278e-20,
        0.0,
        4.3200511470350152435e-22,
        0.0,
        -1.8230389229596893305e-22,
    ),
)
