helper1(v0);
assertEquals(0, v1);
values.add(24);
obj.method4();
obj.method5();
String s6 = builder.toString();
